#pragma once

// Exact model of V_P = M(1) (x) C[P] for the A_l root lattice, with the
// vertex operators x_i(z) = Y(e^{gamma_i}, z) acting on finite combinations of
// Fock states. Used as an independent oracle for the relations, for
// straightening results and for the rank form of the basis theorem.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "combinatorics.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace fsbasis::voa {

/// A point sum q_k alpha_k + omega_r of the weight lattice P.
struct lattice_point {
    std::vector<int> q;  // simple-root coordinates
    int sector = 0;      // r, with omega_0 = 0

    friend auto operator<=>(const lattice_point&, const lattice_point&) = default;
};

/// Cartan data of A_l and the arithmetic of P = union of Q + omega_r.
class root_data {
public:
    explicit root_data(int rank) : rank_(rank)
    {
        if (rank < 1) {
            throw std::invalid_argument("root_data: rank must be >= 1");
        }
        const int n = rank + 1;
        // (l+1) * (A^{-1})_{ik} = min(i,k) (l+1 - max(i,k)); row 0 is omega_0 = 0.
        scaled_inverse_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(rank), 0));
        for (int i = 1; i <= rank; ++i) {
            for (int k = 1; k <= rank; ++k) {
                scaled_inverse_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - 1)] =
                    std::min(i, k) * (n - std::max(i, k));
            }
        }
    }

    [[nodiscard]] int rank() const noexcept { return rank_; }

    [[nodiscard]] int cartan(int i, int j) const noexcept
    {
        if (i == j) {
            return 2;
        }
        return (i - j == 1 || j - i == 1) ? -1 : 0;
    }

    /// gamma_i = alpha_i + ... + alpha_l in simple-root coordinates.
    [[nodiscard]] std::vector<int> gamma(int color) const
    {
        std::vector<int> a(static_cast<std::size_t>(rank_), 0);
        for (int k = color; k <= rank_; ++k) {
            a[static_cast<std::size_t>(k - 1)] = 1;
        }
        return a;
    }

    /// <sum a_i alpha_i, sum b_j alpha_j>.
    [[nodiscard]] int pairing_q(const std::vector<int>& a, const std::vector<int>& b) const
    {
        int s = 0;
        for (int i = 1; i <= rank_; ++i) {
            for (int j = std::max(1, i - 1); j <= std::min(rank_, i + 1); ++j) {
                s += a[static_cast<std::size_t>(i - 1)] * cartan(i, j) * b[static_cast<std::size_t>(j - 1)];
            }
        }
        return s;
    }

    /// <sum a_i alpha_i, mu>, using <alpha_i, omega_r> = delta_{ir}.
    [[nodiscard]] int pairing(const std::vector<int>& a, const lattice_point& mu) const
    {
        int s = pairing_q(a, mu.q);
        if (mu.sector > 0) {
            s += a[static_cast<std::size_t>(mu.sector - 1)];
        }
        return s;
    }

    /// <alpha_i, alpha_d> summed over the support of gamma_color.
    [[nodiscard]] int gamma_dot_alpha(int color, int direction) const
    {
        int s = 0;
        for (int k = color; k <= rank_; ++k) {
            s += cartan(k, direction);
        }
        return s;
    }

    /// omega_r + omega_j = omega_s + offset with offset in Q; returns (s, offset).
    [[nodiscard]] std::pair<int, std::vector<int>> omega_sum(int r, int j) const
    {
        const int n = rank_ + 1;
        const int s = (r + j) % n;
        std::vector<int> offset(static_cast<std::size_t>(rank_), 0);
        for (int k = 0; k < rank_; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            const int scaled = scaled_inverse_[static_cast<std::size_t>(r)][kk] +
                               scaled_inverse_[static_cast<std::size_t>(j)][kk] -
                               scaled_inverse_[static_cast<std::size_t>(s)][kk];
            if (scaled % n != 0) {
                throw std::logic_error("root_data: omega sum not in the expected coset");
            }
            offset[kk] = scaled / n;
        }
        return {s, std::move(offset)};
    }

    [[nodiscard]] lattice_point omega(int r) const
    {
        return {std::vector<int>(static_cast<std::size_t>(rank_), 0), r};
    }

    [[nodiscard]] lattice_point shifted(const lattice_point& mu, const std::vector<int>& a) const
    {
        lattice_point out = mu;
        for (std::size_t k = 0; k < out.q.size(); ++k) {
            out.q[k] += a[k];
        }
        return out;
    }

    /// mu + omega_j, renormalized to Q + omega_s.
    [[nodiscard]] lattice_point plus_omega(const lattice_point& mu, int j) const
    {
        auto [s, offset] = omega_sum(mu.sector, j);
        lattice_point out = shifted(mu, offset);
        out.sector = s;
        return out;
    }

private:
    int rank_;
    std::vector<std::vector<int>> scaled_inverse_;
};

/// Bimultiplicative sign eps(alpha, mu) for alpha in Q and mu in P, given by
/// its values on simple roots and extended to cosets by eps(a, b + omega_r) =
/// eps(a, b).
class cocycle_table {
public:
    /// eps(alpha_i, alpha_j) = (-1)^{<alpha_i, alpha_j>} for i > j, else 1.
    static cocycle_table standard(const root_data& roots)
    {
        cocycle_table t;
        const int l = roots.rank();
        t.signs_.assign(static_cast<std::size_t>(l), std::vector<int>(static_cast<std::size_t>(l), 1));
        for (int i = 1; i <= l; ++i) {
            for (int j = 1; j < i; ++j) {
                t.signs_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                    roots.cartan(i, j) % 2 == 0 ? 1 : -1;
            }
        }
        return t;
    }

    /// Overrides eps(alpha_i, alpha_j); used to build negative controls.
    [[nodiscard]] cocycle_table with_sign(int i, int j, int sign) const
    {
        cocycle_table t = *this;
        t.signs_.at(static_cast<std::size_t>(i - 1)).at(static_cast<std::size_t>(j - 1)) = sign;
        return t;
    }

    [[nodiscard]] int sign(int i, int j) const
    {
        return signs_.at(static_cast<std::size_t>(i - 1)).at(static_cast<std::size_t>(j - 1));
    }

    [[nodiscard]] int operator()(const std::vector<int>& a, const std::vector<int>& b) const
    {
        int parity = 0;
        for (std::size_t i = 0; i < signs_.size(); ++i) {
            for (std::size_t j = 0; j < signs_.size(); ++j) {
                if (signs_[i][j] < 0) {
                    parity ^= (a[i] * b[j]) & 1;
                }
            }
        }
        return parity != 0 ? -1 : 1;
    }
    [[nodiscard]] int operator()(const std::vector<int>& a, const lattice_point& mu) const { return (*this)(a, mu.q); }

private:
    std::vector<std::vector<int>> signs_;
};

/// One Heisenberg creation operator alpha_direction(-mode).
struct mode_factor {
    int direction = 1;
    int mode = 1;

    friend auto operator<=>(const mode_factor&, const mode_factor&) = default;
};

/// Sorted multiset of creation operators applied to the Fock vacuum.
using heis_monomial = std::vector<mode_factor>;

struct fock_state {
    heis_monomial heis;
    lattice_point lattice;

    /// Sum of Heisenberg modes; lattice conformal weights are not included.
    [[nodiscard]] int degree() const noexcept
    {
        int d = 0;
        for (const auto& f : heis) {
            d += f.mode;
        }
        return d;
    }

    /// "a1(-1) a2(-2) e[1,0;r=1]"
    [[nodiscard]] std::string str() const
    {
        std::string out;
        for (const auto& f : heis) {
            out += "a" + std::to_string(f.direction) + "(-" + std::to_string(f.mode) + ") ";
        }
        out += "e[";
        for (std::size_t k = 0; k < lattice.q.size(); ++k) {
            out += (k != 0 ? "," : "") + std::to_string(lattice.q[k]);
        }
        return out + ";r=" + std::to_string(lattice.sector) + "]";
    }

    friend auto operator<=>(const fock_state&, const fock_state&) = default;
};

/// Finite exact combination of Fock states; zero coefficients never stored.
class fock_vector {
public:
    using map_type = std::map<fock_state, rational>;

    fock_vector() = default;
    explicit fock_vector(fock_state s, rational c = 1) { add(std::move(s), c); }

    void add(fock_state s, const rational& c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(std::move(s), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }
    void add(const fock_vector& o, const rational& scale = 1)
    {
        for (const auto& [s, c] : o.terms_) {
            add(s, c * scale);
        }
    }

    [[nodiscard]] const map_type& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    friend bool operator==(const fock_vector&, const fock_vector&) = default;
    friend fock_vector operator-(const fock_vector& a, const fock_vector& b)
    {
        fock_vector r = a;
        r.add(b, -1);
        return r;
    }

    [[nodiscard]] std::string str() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string out;
        for (const auto& [s, c] : terms_) {
            out += (out.empty() ? "" : " + ") + c.str() + " * " + s.str();
        }
        return out;
    }

private:
    map_type terms_;
};

/// If v = c * w for a nonzero scalar c, returns c.
inline std::optional<rational> proportionality(const fock_vector& v, const fock_vector& w)
{
    if (v.is_zero() || w.is_zero() || v.size() != w.size()) {
        return std::nullopt;
    }
    const rational c = v.terms().begin()->second / w.terms().begin()->second;
    fock_vector scaled;
    scaled.add(w, c);
    if (scaled != v) {
        return std::nullopt;
    }
    return c;
}

/// Index of a Heisenberg monomial in a lattice_module's intern table.
using heis_id = std::uint32_t;
/// Sparse combination of interned monomials, sorted by id, no zero entries.
using sparse_terms = std::vector<std::pair<heis_id, rational>>;

/// A combination of Fock states sharing one lattice point. Every operator in
/// this module maps such vectors to such vectors.
struct graded_vector {
    lattice_point lattice;
    sparse_terms terms;

    [[nodiscard]] bool is_zero() const noexcept { return terms.empty(); }
    friend bool operator==(const graded_vector&, const graded_vector&) = default;
};

/// The operators x_i(m), e^{omega_j} on V_P. Holds memo tables, so a single
/// instance is not meant to be shared across threads.
class lattice_module {
public:
    explicit lattice_module(int rank) : lattice_module(rank, cocycle_table::standard(root_data(rank))) {}
    lattice_module(int rank, cocycle_table eps) : roots_(rank), eps_(std::move(eps))
    {
        intern({});
        creation_memo_.resize(static_cast<std::size_t>(rank) + 1);
    }

    [[nodiscard]] const root_data& roots() const noexcept { return roots_; }
    [[nodiscard]] const cocycle_table& cocycle() const noexcept { return eps_; }
    [[nodiscard]] int rank() const noexcept { return roots_.rank(); }

    heis_id intern(const heis_monomial& h)
    {
        if (auto it = ids_.find(h); it != ids_.end()) {
            return it->second;
        }
        if (!std::is_sorted(h.begin(), h.end())) {
            throw std::invalid_argument("lattice_module: Heisenberg monomial not sorted");
        }
        int deg = 0;
        for (const auto& f : h) {
            if (f.direction < 1 || f.direction > rank() || f.mode < 1) {
                throw std::invalid_argument("lattice_module: bad Heisenberg factor");
            }
            deg += f.mode;
        }
        const auto id = static_cast<heis_id>(table_.size());
        table_.push_back(h);
        degrees_.push_back(deg);
        ids_.emplace(h, id);
        return id;
    }
    [[nodiscard]] const heis_monomial& heis(heis_id id) const { return table_.at(id); }
    [[nodiscard]] int heis_degree(heis_id id) const { return degrees_.at(id); }

    [[nodiscard]] graded_vector to_graded(const fock_state& s) { return {s.lattice, {{intern(s.heis), rational{1}}}}; }

    [[nodiscard]] fock_vector to_fock(const graded_vector& v) const
    {
        fock_vector out;
        for (const auto& [id, c] : v.terms) {
            out.add(fock_state{heis(id), v.lattice}, c);
        }
        return out;
    }

    /// v_r = 1 (x) e^{omega_r}.
    [[nodiscard]] fock_vector highest_weight_vector(int r) const { return fock_vector(fock_state{{}, roots_.omega(r)}); }

    /// Largest mode m with x_color(m) w possibly nonzero on a state of the given
    /// Heisenberg degree and lattice point.
    [[nodiscard]] int max_live_mode(int color, int degree, const lattice_point& mu) const
    {
        return degree - 1 - roots_.pairing(roots_.gamma(color), mu);
    }

    /// Coefficient of z^{-m-1} in E^-(-gamma,z) E^+(-gamma,z) e^gamma z^gamma eps(gamma,.).
    [[nodiscard]] graded_vector apply_x(int color, int mode, const graded_vector& v)
    {
        check_color(color);
        const auto g = roots_.gamma(color);
        const int shift = -mode - 1 - roots_.pairing(g, v.lattice);
        graded_vector out{roots_.shifted(v.lattice, g), {}};
        accumulator& acc = apply_acc_;
        for (const auto& [id, c] : v.terms) {
            if (shift + degrees_[id] < 0) {
                continue;
            }
            for (const auto& [hid, hc] : heisenberg_action(color, shift, id)) {
                acc.add(hid, c * hc);
            }
        }
        out.terms = acc.finish(rational{eps_(g, v.lattice)});
        return out;
    }

    [[nodiscard]] fock_vector apply_x(int color, int mode, const fock_state& w)
    {
        return to_fock(apply_x(color, mode, to_graded(w)));
    }

    [[nodiscard]] fock_vector apply_x(int color, int mode, const fock_vector& v)
    {
        fock_vector out;
        for (const auto& g : split(v)) {
            out.add(to_fock(apply_x(color, mode, g)));
        }
        return out;
    }

    /// b v_r, factors applied right to left.
    [[nodiscard]] graded_vector apply_monomial_graded(const monomial& b, int r)
    {
        graded_vector v{roots_.omega(r), {{0, rational{1}}}};
        const auto& fs = b.factors();
        for (auto it = fs.rbegin(); it != fs.rend() && !v.is_zero(); ++it) {
            v = apply_x(it->color, -it->depth, v);
        }
        return v;
    }
    [[nodiscard]] fock_vector apply_monomial(const monomial& b, int r) { return to_fock(apply_monomial_graded(b, r)); }

    /// e^{omega_j}: the bare lattice shift mu -> mu + omega_j.
    [[nodiscard]] graded_vector simple_current(int j, const graded_vector& v) const
    {
        return {roots_.plus_omega(v.lattice, j), v.terms};
    }
    [[nodiscard]] fock_vector simple_current(int j, const fock_vector& v) const
    {
        fock_vector out;
        for (const auto& [s, c] : v.terms()) {
            out.add(fock_state{s.heis, roots_.plus_omega(s.lattice, j)}, c);
        }
        return out;
    }

    /// The sign c with x_i(m) e^{omega_j} = c e^{omega_j} x_i(m + delta_{i<=j})
    /// on the summand L(Lambda_r). Equals 1 on L(Lambda_0).
    [[nodiscard]] int current_sign(int i, int j, int r) const
    {
        return eps_(roots_.gamma(i), roots_.omega_sum(r, j).second);
    }

private:
    // Dense scratch indexed by heis_id; finish() returns the sorted nonzero
    // entries and leaves the scratch clean for reuse.
    class accumulator {
    public:
        void add(heis_id id, const rational& c)
        {
            if (id >= values_.size()) {
                values_.resize(std::max<std::size_t>(id + 1, values_.size() * 2));
                live_.resize(values_.size(), 0);
            }
            if (live_[id] == 0) {
                live_[id] = 1;
                touched_.push_back(id);
                values_[id] = c;
            } else {
                values_[id] += c;
            }
        }
        sparse_terms finish(const rational& scale)
        {
            std::sort(touched_.begin(), touched_.end());
            sparse_terms out;
            out.reserve(touched_.size());
            for (heis_id id : touched_) {
                if (!values_[id].is_zero()) {
                    out.emplace_back(id, values_[id] * scale);
                }
                live_[id] = 0;
            }
            touched_.clear();
            return out;
        }

    private:
        std::vector<rational> values_;
        std::vector<char> live_;
        std::vector<heis_id> touched_;
    };

    void check_color(int color) const
    {
        if (color < 1 || color > roots_.rank()) {
            throw std::invalid_argument("lattice_module: color out of range");
        }
    }

    std::vector<graded_vector> split(const fock_vector& v)
    {
        std::map<lattice_point, sparse_terms> parts;
        for (const auto& [s, c] : v.terms()) {
            parts[s.lattice].emplace_back(intern(s.heis), c);
        }
        std::vector<graded_vector> out;
        for (auto& [mu, terms] : parts) {
            std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            out.push_back({mu, std::move(terms)});
        }
        return out;
    }

    heis_id product(heis_id a, heis_id b)
    {
        if (a == 0 || b == 0) {
            return a == 0 ? b : a;
        }
        const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
        if (auto it = product_memo_.find(key); it != product_memo_.end()) {
            return it->second;
        }
        const auto& ha = table_[a];
        const auto& hb = table_[b];
        heis_monomial merged;
        merged.reserve(ha.size() + hb.size());
        std::merge(ha.begin(), ha.end(), hb.begin(), hb.end(), std::back_inserter(merged));
        const heis_id id = intern(merged);
        product_memo_.emplace(key, id);
        return id;
    }

    // The Heisenberg part of x_color(m) on h, where shift = -m - 1 - <gamma, mu>:
    // sum over k of [z^{shift+k}] E^-(-gamma, z) times [z^{-k}] E^+(-gamma, z) h.
    // Depends on the lattice point only through the shift, so it is memoized.
    const sparse_terms& heisenberg_action(int color, int shift, heis_id h)
    {
        const std::uint64_t key = (static_cast<std::uint64_t>(color) << 48) |
                                  (static_cast<std::uint64_t>(static_cast<std::uint16_t>(shift + 32768)) << 32) | h;
        if (auto it = action_memo_.find(key); it != action_memo_.end()) {
            return it->second;
        }
        if (action_memo_.size() >= memo_limit) {
            action_memo_.clear();
            lowered_memo_.clear();
        }
        const std::vector<sparse_terms> low = lowered(color, h);
        accumulator& acc = action_acc_;
        for (int k = std::max(0, -shift); k < static_cast<int>(low.size()); ++k) {
            const auto& part = low[static_cast<std::size_t>(k)];
            if (part.empty()) {
                continue;
            }
            const auto& high = creation(color, shift + k);
            for (const auto& [hid, hc] : high) {
                for (const auto& [lid, lc] : part) {
                    acc.add(product(hid, lid), hc * lc);
                }
            }
        }
        return action_memo_.emplace(key, acc.finish(rational{1})).first->second;
    }

    // [z^{-k}] E^+(-gamma, z) h for k = 0..deg(h), via
    // k L_k = -sum_{n=1}^k gamma(n) L_{k-n}.
    std::vector<sparse_terms> lowered(int color, heis_id h)
    {
        const std::uint64_t key = (static_cast<std::uint64_t>(color) << 32) | h;
        if (auto it = lowered_memo_.find(key); it != lowered_memo_.end()) {
            return it->second;
        }
        const int deg = degrees_[h];
        std::vector<sparse_terms> out(static_cast<std::size_t>(deg) + 1);
        out[0] = {{h, rational{1}}};
        for (int k = 1; k <= deg; ++k) {
            accumulator& acc = lowered_acc_;
            for (int n = 1; n <= k; ++n) {
                for (const auto& [id, c] : out[static_cast<std::size_t>(k - n)]) {
                    for (const auto& [rid, rc] : annihilate(color, n, id)) {
                        acc.add(rid, c * rc);
                    }
                }
            }
            out[static_cast<std::size_t>(k)] = acc.finish(rational{-1, k});
        }
        lowered_memo_.emplace(key, out);
        return out;
    }

    // gamma(n), n >= 1, acting as n <gamma, alpha_d> d/d alpha_d(-n) on one monomial.
    sparse_terms annihilate(int color, int n, heis_id h)
    {
        sparse_terms out;
        const heis_monomial m = table_[h];
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k].mode != n || (k > 0 && m[k - 1] == m[k])) {
                continue;
            }
            std::size_t mult = 1;
            while (k + mult < m.size() && m[k + mult] == m[k]) {
                ++mult;
            }
            const int dot = roots_.gamma_dot_alpha(color, m[k].direction);
            if (dot == 0) {
                continue;
            }
            heis_monomial reduced = m;
            reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(k));
            out.emplace_back(intern(reduced), rational{static_cast<std::int64_t>(mult) * n * dot});
        }
        return out;
    }

    // Coefficient of z^K in E^-(-gamma, z) = exp(sum gamma(-n) z^n / n), via
    // K P_K = sum_{n=1}^K gamma(-n) P_{K-n}.
    const sparse_terms& creation(int color, int big_k)
    {
        auto& table = creation_memo_[static_cast<std::size_t>(color)];
        if (table.empty()) {
            table.push_back({{0, rational{1}}});
        }
        while (static_cast<int>(table.size()) <= big_k) {
            const int k = static_cast<int>(table.size());
            accumulator acc;
            for (int n = 1; n <= k; ++n) {
                for (const auto& [id, c] : table[static_cast<std::size_t>(k - n)]) {
                    for (int d = color; d <= roots_.rank(); ++d) {
                        heis_monomial grown = table_[id];
                        grown.insert(std::upper_bound(grown.begin(), grown.end(), mode_factor{d, n}), mode_factor{d, n});
                        acc.add(intern(grown), c);
                    }
                }
            }
            table.push_back(acc.finish(rational{1, k}));
        }
        return table[static_cast<std::size_t>(big_k)];
    }

    root_data roots_;
    cocycle_table eps_;
    static constexpr std::size_t memo_limit = 400000;
    std::vector<heis_monomial> table_;
    std::vector<int> degrees_;
    std::map<heis_monomial, heis_id> ids_;
    std::unordered_map<std::uint64_t, heis_id> product_memo_;
    std::vector<std::vector<sparse_terms>> creation_memo_;
    std::unordered_map<std::uint64_t, std::vector<sparse_terms>> lowered_memo_;
    std::unordered_map<std::uint64_t, sparse_terms> action_memo_;
    accumulator apply_acc_;
    accumulator action_acc_;
    accumulator lowered_acc_;
};

/// All Heisenberg monomials in l directions with total mode <= max_degree.
inline std::vector<heis_monomial> heis_basis(int rank, int max_degree)
{
    std::vector<heis_monomial> out;
    heis_monomial cur;
    // Non-decreasing sequences of mode_factor with bounded mode sum.
    auto rec = [&](auto&& self, mode_factor lowest, int budget) -> void {
        heis_monomial sorted = cur;
        std::sort(sorted.begin(), sorted.end());
        out.push_back(std::move(sorted));
        for (int mode = lowest.mode; mode <= budget; ++mode) {
            for (int dir = (mode == lowest.mode ? lowest.direction : 1); dir <= rank; ++dir) {
                cur.push_back({dir, mode});
                self(self, mode_factor{dir, mode}, budget - mode);
                cur.pop_back();
            }
        }
    };
    rec(rec, mode_factor{1, 1}, max_degree);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Rank verification of the basis theorem.

struct rank_triple {
    std::size_t count_admissible = 0;
    std::size_t rank_admissible = 0;
    std::size_t rank_all_pbw = 0;

    [[nodiscard]] bool all_equal() const noexcept
    {
        return count_admissible == rank_admissible && rank_admissible == rank_all_pbw;
    }
    friend bool operator==(const rank_triple&, const rank_triple&) = default;
};

struct sector_rank {
    rank_triple ranks;
    std::vector<monomial> admissible;  // ascending
    std::vector<fock_state> states;    // support of the sector's vectors, ascending
};

namespace detail {

inline std::size_t rank_of(const std::vector<fock_vector>& vectors, const std::map<fock_state, std::size_t>& index)
{
    std::vector<std::vector<rational>> rows;
    for (const auto& v : vectors) {
        if (v.is_zero()) {
            continue;
        }
        std::vector<rational> row(index.size());
        for (const auto& [s, c] : v.terms()) {
            row[index.at(s)] = c;
        }
        rows.push_back(std::move(row));
    }
    return linalg::exact_rank(rows);
}

}  // namespace detail

/// Count and exact ranks for one (weight, degree) sector.
inline sector_rank sector_graded_rank(lattice_module& mod, const setup& s, const weight_vector& w, int degree)
{
    sector_rank out;
    std::vector<fock_vector> all;
    std::vector<fock_vector> adm;
    std::map<fock_state, std::size_t> index;
    for (const auto& b : enumerate_pbw(w, degree)) {
        auto v = mod.apply_monomial(b, s.module_index);
        for (const auto& [st, c] : v.terms()) {
            index.emplace(st, 0);
        }
        if (is_admissible(b, s)) {
            out.admissible.push_back(b);
            adm.push_back(v);
        }
        all.push_back(std::move(v));
    }
    std::size_t k = 0;
    for (auto& [st, pos] : index) {
        pos = k++;
        out.states.push_back(st);
    }
    out.ranks.count_admissible = out.admissible.size();
    out.ranks.rank_admissible = detail::rank_of(adm, index);
    out.ranks.rank_all_pbw = detail::rank_of(all, index);
    return out;
}

/// Versioned JSON cache of sector ranks keyed by (l, r, weight, degree).
class sector_cache {
public:
    static constexpr int version = 1;

    [[nodiscard]] static std::string key(const setup& s, const weight_vector& w, int degree)
    {
        return std::to_string(s.rank) + "|" + std::to_string(s.module_index) + "|" + w.key() + "|" +
               std::to_string(degree);
    }

    [[nodiscard]] std::optional<sector_rank> lookup(const setup& s, const weight_vector& w, int degree) const
    {
        auto it = entries_.find(key(s, w, degree));
        if (it == entries_.end()) {
            return std::nullopt;
        }
        return decode(it->second, s);
    }

    void store(const setup& s, const weight_vector& w, int degree, const sector_rank& r)
    {
        entries_[key(s, w, degree)] = encode(r);
    }

    [[nodiscard]] nlohmann::json to_json() const
    {
        nlohmann::json entries = nlohmann::json::object();
        for (const auto& [k, v] : entries_) {
            entries[k] = v;
        }
        return {{"version", version}, {"entries", entries}};
    }

    static sector_cache from_json(const nlohmann::json& j)
    {
        if (j.at("version").get<int>() != version) {
            throw std::runtime_error("sector_cache: unsupported version");
        }
        sector_cache c;
        for (const auto& [k, v] : j.at("entries").items()) {
            c.entries_[k] = v;
        }
        return c;
    }

    /// Missing file yields an empty cache.
    static sector_cache load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) {
            return {};
        }
        return from_json(nlohmann::json::parse(in));
    }

    void save(const std::string& path) const
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out) {
            throw std::runtime_error("sector_cache: cannot write " + path);
        }
        out << to_json().dump(1) << '\n';
    }

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

private:
    static nlohmann::json encode(const sector_rank& r)
    {
        nlohmann::json adm = nlohmann::json::array();
        for (const auto& m : r.admissible) {
            adm.push_back(m.str());
        }
        nlohmann::json states = nlohmann::json::array();
        for (const auto& st : r.states) {
            nlohmann::json heis = nlohmann::json::array();
            for (const auto& f : st.heis) {
                heis.push_back({f.direction, f.mode});
            }
            states.push_back({{"heis", heis}, {"q", st.lattice.q}, {"sector", st.lattice.sector}});
        }
        return {{"count_admissible", r.ranks.count_admissible},
                {"rank_admissible", r.ranks.rank_admissible},
                {"rank_all_pbw", r.ranks.rank_all_pbw},
                {"admissible", adm},
                {"states", states}};
    }

    static sector_rank decode(const nlohmann::json& j, const setup& s)
    {
        sector_rank r;
        r.ranks.count_admissible = j.at("count_admissible").get<std::size_t>();
        r.ranks.rank_admissible = j.at("rank_admissible").get<std::size_t>();
        r.ranks.rank_all_pbw = j.at("rank_all_pbw").get<std::size_t>();
        for (const auto& m : j.at("admissible")) {
            r.admissible.push_back(monomial::parse(m.get<std::string>(), s.rank));
        }
        for (const auto& st : j.at("states")) {
            fock_state f;
            for (const auto& h : st.at("heis")) {
                f.heis.push_back({h.at(0).get<int>(), h.at(1).get<int>()});
            }
            f.lattice.q = st.at("q").get<std::vector<int>>();
            f.lattice.sector = st.at("sector").get<int>();
            r.states.push_back(std::move(f));
        }
        return r;
    }

    std::map<std::string, nlohmann::json> entries_;
};

/// graded_rank over the degree-d sector, restricted to weight w when given.
/// Ranks add over weights because distinct weights land on distinct lattice
/// points.
inline rank_triple graded_rank(const setup& s, int degree, const std::optional<weight_vector>& w = std::nullopt,
                               sector_cache* cache = nullptr)
{
    if (degree < 0) {
        throw std::invalid_argument("graded_rank: negative degree");
    }
    lattice_module mod(s.rank);
    std::vector<weight_vector> weights = w ? std::vector<weight_vector>{*w} : pbw_weights(s.rank, degree);
    rank_triple total;
    for (const auto& wt : weights) {
        if (wt.rank() != s.rank) {
            throw std::invalid_argument("graded_rank: weight has wrong number of entries");
        }
        std::optional<sector_rank> hit = cache != nullptr ? cache->lookup(s, wt, degree) : std::nullopt;
        if (!hit) {
            hit = sector_graded_rank(mod, s, wt, degree);
            if (cache != nullptr) {
                cache->store(s, wt, degree, *hit);
            }
        }
        total.count_admissible += hit->ranks.count_admissible;
        total.rank_admissible += hit->ranks.rank_admissible;
        total.rank_all_pbw += hit->ranks.rank_all_pbw;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Relation suite.

struct relation_report {
    bool passed = true;
    std::string failed_check;     // empty when passed
    std::string counterexample;   // human-readable first failure
    std::size_t identities_checked = 0;
    std::map<int, rational> init2_constants;  // r -> C in x_r(-1) v_{r-1} = C e^{omega_l} v_r
};

struct relation_options {
    int max_total_depth = 6;  // M_max
    int max_fock_degree = 4;  // d_max
    /// Lattice points tested per sector: omega_r + beta for beta in {0, +gamma_i},
    /// and also -gamma_i when set.
    bool include_negative_shifts = false;
    /// Commutativity is checked for modes m, n >= -commutator_window.
    int commutator_window = 2;
    std::optional<cocycle_table> cocycle;  // defaults to the standard one
};

namespace detail {

inline std::vector<graded_vector> test_states(lattice_module& mod, int max_degree, bool negative_shifts)
{
    const root_data& roots = mod.roots();
    const auto heis = heis_basis(roots.rank(), max_degree);
    std::vector<graded_vector> out;
    for (int r = 0; r <= roots.rank(); ++r) {
        std::vector<lattice_point> points{roots.omega(r)};
        for (int i = 1; i <= roots.rank(); ++i) {
            points.push_back(roots.shifted(roots.omega(r), roots.gamma(i)));
            if (negative_shifts) {
                auto neg = roots.gamma(i);
                for (int& x : neg) {
                    x = -x;
                }
                points.push_back(roots.shifted(roots.omega(r), neg));
            }
        }
        for (const auto& p : points) {
            for (const auto& h : heis) {
                out.push_back({p, {{mod.intern(h), rational{1}}}});
            }
        }
    }
    return out;
}

inline void add_into(sparse_terms& acc, const sparse_terms& v)
{
    sparse_terms out;
    out.reserve(acc.size() + v.size());
    auto a = acc.begin();
    auto b = v.begin();
    while (a != acc.end() || b != v.end()) {
        if (b == v.end() || (a != acc.end() && a->first < b->first)) {
            out.push_back(*a++);
        } else if (a == acc.end() || b->first < a->first) {
            out.push_back(*b++);
        } else {
            rational c = a->second + b->second;
            if (!c.is_zero()) {
                out.emplace_back(a->first, c);
            }
            ++a;
            ++b;
        }
    }
    acc = std::move(out);
}

inline std::string describe(const lattice_module& mod, const graded_vector& v) { return mod.to_fock(v).str(); }

// Caches x_color(mode) w for one fixed w.
class single_applications {
public:
    single_applications(lattice_module& mod, const graded_vector& w) : mod_(mod), w_(w) {}
    const graded_vector& get(int color, int mode)
    {
        auto key = std::make_pair(color, mode);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, mod_.apply_x(color, mode, w_)).first;
        }
        return it->second;
    }

private:
    lattice_module& mod_;
    const graded_vector& w_;
    std::map<std::pair<int, int>, graded_vector> cache_;
};

}  // namespace detail

/// Checks, in order: x_i(z)^2 = 0, x_i(z) x_j(z) = 0 (i < j), commutativity
/// of the x_i(m), x_i(m) v_r = 0 for m >= -delta_{i<=r} (and sharpness), the
/// simple current law, and x_r(-1) v_{r-1} = C e^{omega_l} v_r with C != 0.
/// Stops at the first counterexample.
///
/// The coefficient sum_{a+b=M} x_i(-a) x_j(-b) w has finitely many nonzero
/// terms once each pair is evaluated with the more annihilating operator
/// first; that reordering is what the commutativity check backs.
inline relation_report verify_relations(int rank, const relation_options& opt = {})
{
    const root_data roots(rank);
    lattice_module mod(rank, opt.cocycle ? *opt.cocycle : cocycle_table::standard(roots));
    relation_report rep;
    const auto states = detail::test_states(mod, opt.max_fock_degree, opt.include_negative_shifts);

    auto fail = [&](std::string check, std::string detail) {
        rep.passed = false;
        rep.failed_check = std::move(check);
        rep.counterexample = std::move(detail);
        return rep;
    };
    auto name = [&](const graded_vector& w) { return detail::describe(mod, w); };

    for (const bool same_color : {true, false}) {
        for (int i = 1; i <= rank; ++i) {
            for (int j = same_color ? i : i + 1; j <= (same_color ? i : rank); ++j) {
                for (const auto& w : states) {
                    const int deg = mod.heis_degree(w.terms.front().first);
                    const int a_min = -mod.max_live_mode(i, deg, w.lattice);
                    const int b_min = -mod.max_live_mode(j, deg, w.lattice);
                    detail::single_applications first(mod, w);
                    for (int big_m = 2; big_m <= opt.max_total_depth; ++big_m) {
                        ++rep.identities_checked;
                        sparse_terms sum;
                        for (int b = b_min; big_m - b >= a_min; ++b) {
                            const int a = big_m - b;
                            const auto& inner = a >= b ? first.get(j, -b) : first.get(i, -a);
                            if (inner.is_zero()) {
                                continue;
                            }
                            detail::add_into(sum, (a >= b ? mod.apply_x(i, -a, inner) : mod.apply_x(j, -b, inner)).terms);
                        }
                        if (!sum.empty()) {
                            const graded_vector v{roots.shifted(roots.shifted(w.lattice, roots.gamma(i)), roots.gamma(j)),
                                                  std::move(sum)};
                            return fail(same_color ? "x_i(z)^2 = 0" : "x_i(z) x_j(z) = 0",
                                        "i=" + std::to_string(i) + " j=" + std::to_string(j) +
                                            " M=" + std::to_string(big_m) + " on " + name(w) + " gives " + name(v));
                        }
                    }
                }
            }
        }
    }

    for (int i = 1; i <= rank; ++i) {
        for (int j = i; j <= rank; ++j) {
            for (const auto& w : states) {
                const int deg = mod.heis_degree(w.terms.front().first);
                detail::single_applications first(mod, w);
                for (int m = -opt.commutator_window; m <= mod.max_live_mode(i, deg, w.lattice); ++m) {
                    for (int n = -opt.commutator_window; n <= mod.max_live_mode(j, deg, w.lattice); ++n) {
                        ++rep.identities_checked;
                        const auto lhs = mod.apply_x(j, n, first.get(i, m));
                        const auto rhs = mod.apply_x(i, m, first.get(j, n));
                        if (lhs != rhs) {
                            return fail("commutativity", "x_" + std::to_string(i) + "(" + std::to_string(m) + ") x_" +
                                                             std::to_string(j) + "(" + std::to_string(n) + ") on " +
                                                             name(w));
                        }
                    }
                }
            }
        }
    }

    for (int r = 0; r <= rank; ++r) {
        const setup s(rank, r);
        const graded_vector v{roots.omega(r), {{0, rational{1}}}};
        for (int i = 1; i <= rank; ++i) {
            for (int m = -s.delta(i); m <= opt.max_total_depth; ++m) {
                ++rep.identities_checked;
                if (!mod.apply_x(i, m, v).is_zero()) {
                    return fail("x_i(m) v_r = 0", "i=" + std::to_string(i) + " m=" + std::to_string(m) +
                                                      " r=" + std::to_string(r));
                }
            }
            ++rep.identities_checked;
            if (mod.apply_x(i, -s.delta(i) - 1, v).is_zero()) {
                return fail("x_i(m) v_r = 0", "bound not sharp: i=" + std::to_string(i) + " r=" + std::to_string(r));
            }
        }
    }

    for (const auto& w : states) {
        detail::single_applications first(mod, w);
        for (int j = 1; j <= rank; ++j) {
            const auto shifted = mod.simple_current(j, w);
            for (int i = 1; i <= rank; ++i) {
                const int c = mod.current_sign(i, j, w.lattice.sector);
                const int step = i <= j ? 1 : 0;
                for (int m = -opt.max_total_depth; m <= opt.max_total_depth; ++m) {
                    ++rep.identities_checked;
                    const auto lhs = mod.apply_x(i, m, shifted);
                    auto rhs = mod.simple_current(j, first.get(i, m + step));
                    for (auto& [id, x] : rhs.terms) {
                        x = x * rational{c};
                    }
                    if (lhs != rhs) {
                        return fail("simple current commutation",
                                    "i=" + std::to_string(i) + " j=" + std::to_string(j) + " m=" + std::to_string(m) +
                                        " on " + name(w));
                    }
                }
            }
        }
    }

    for (int r = 1; r <= rank; ++r) {
        ++rep.identities_checked;
        const auto lhs = mod.apply_x(r, -1, mod.highest_weight_vector(r - 1));
        const auto rhs = mod.simple_current(rank, mod.highest_weight_vector(r));
        const auto c = proportionality(lhs, rhs);
        if (!c) {
            return fail("x_r(-1) v_{r-1} = C e^{omega_l} v_r", "r=" + std::to_string(r) + ": " + lhs.str() +
                                                                   " vs " + rhs.str());
        }
        rep.init2_constants.emplace(r, *c);
    }
    return rep;
}

}  // namespace fsbasis::voa
