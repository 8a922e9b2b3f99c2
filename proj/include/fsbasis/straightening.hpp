#pragma once

// Rewriting PBW monomial vectors b v_r into combinations of admissible
// monomial vectors. Two independent routes: the ordered rewriting procedure
// (DC rewrites from x_i(z)^2 = 0, IC rewrites from x_i(z) x_j(z) = 0 with
// recursion on shorter sub-monomials) and sector-wide exact elimination.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "combinatorics.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace fsbasis {

/// Finite formal combination of monomials with exact rational coefficients.
/// Zero coefficients are never stored.
class lin_comb {
public:
    using map_type = std::map<monomial, rational>;

    lin_comb() = default;
    explicit lin_comb(const monomial& m, rational c = 1) { add(m, c); }

    void add(const monomial& m, const rational& c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }
    void add(const lin_comb& other, const rational& scale = 1)
    {
        for (const auto& [m, c] : other.terms_) {
            add(m, c * scale);
        }
    }

    [[nodiscard]] const map_type& terms() const noexcept { return terms_; }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] rational coefficient(const monomial& m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? rational{} : it->second;
    }
    void erase(const monomial& m) { terms_.erase(m); }

    friend bool operator==(const lin_comb&, const lin_comb&) = default;

    /// "-2 · x1(-3) x1(-1) + 1/2 · x2(-2) x1(-1)"; "0" when empty.
    [[nodiscard]] std::string str() const
    {
        std::string out;
        for (const auto& [m, c] : terms_) {
            std::string coef = c.str();
            if (!out.empty()) {
                if (c < rational{0}) {
                    out += " - ";
                    coef = (-c).str();
                } else {
                    out += " + ";
                }
            }
            out += m.empty() ? coef : coef + " · " + m.str();
        }
        return out.empty() ? "0" : out;
    }

private:
    map_type terms_;
};

/// [{"coefficient": "p/q", "monomial": "x2(-2) x1(-1)"}, ...] by ascending monomial.
inline nlohmann::json to_json(const lin_comb& v)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [m, c] : v.terms()) {
        out.push_back({{"coefficient", c.str()}, {"monomial", m.str()}});
    }
    return out;
}

inline lin_comb lin_comb_from_json(const nlohmann::json& j, int rank = 0)
{
    lin_comb v;
    for (const auto& t : j) {
        v.add(monomial::parse(t.at("monomial").get<std::string>(), rank),
              rational::parse(t.at("coefficient").get<std::string>()));
    }
    return v;
}

/// The coefficient of z^{M-2} in x_i(z) x_j(z) (i <= j), multiplied by a
/// context monomial.
struct relation_instance {
    int color_i = 1;
    int color_j = 1;
    int total_depth = 2;
    monomial context;
};

/// A factor x_color(-depth) with depth <= delta_{color<=r} kills v_r; by
/// commutativity so does any monomial containing it.
inline bool kills_vacuum(int color, int depth, const setup& s) noexcept { return depth <= s.delta(color); }

inline bool annihilates(const monomial& b, const setup& s)
{
    for (const auto& f : b.factors()) {
        if (kills_vacuum(f.color, f.depth, s)) {
            return true;
        }
    }
    return false;
}

/// Surviving terms of sum_{a+b=M} context x_i(-a) x_j(-b), which vanishes on
/// v_r. Terms with a factor that kills v_r are dropped. For i == j the
/// unordered pair {a, b} carries coefficient 2 (1 for the square).
inline lin_comb relation_terms(const relation_instance& rel, const setup& s)
{
    if (rel.color_i > rel.color_j || rel.color_i < 1 || rel.color_j > s.rank || rel.total_depth < 2) {
        throw std::invalid_argument("relation_terms: invalid relation instance");
    }
    lin_comb out;
    const int big_m = rel.total_depth;
    for (int a = 1; a < big_m; ++a) {
        const int b = big_m - a;
        if (rel.color_i == rel.color_j && a < b) {
            continue;
        }
        if (kills_vacuum(rel.color_i, a, s) || kills_vacuum(rel.color_j, b, s)) {
            continue;
        }
        const rational c = (rel.color_i == rel.color_j && a != b) ? 2 : 1;
        out.add(rel.context * monomial::make({{rel.color_i, a}, {rel.color_j, b}}), c);
    }
    return out;
}

/// Thrown when the straightening machinery meets a state that would
/// contradict spanning or linear independence of the admissible set.
class inconsistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The rewriting procedure. One instance memoizes straightened
/// sub-monomials for the lifetime of the object; results do not depend on
/// the memo state.
class rewriter {
public:
    /// Called for every single rewrite: source monomial and the combination
    /// of (strictly greater) monomials it is replaced by.
    using step_observer = std::function<void(const monomial&, const lin_comb&)>;

    explicit rewriter(setup s, step_observer observer = {}) : setup_(s), observer_(std::move(observer)) {}

    [[nodiscard]] lin_comb straighten(const lin_comb& v)
    {
        lin_comb work;
        for (const auto& [m, c] : v.terms()) {
            if (!annihilates(m, setup_)) {
                work.add(m, c);
            }
        }
        while (true) {
            std::optional<monomial> target;
            for (const auto& [m, c] : work.terms()) {
                if (!is_admissible(m, setup_)) {
                    target = m;
                    break;
                }
            }
            if (!target) {
                return work;
            }
            const rational c = work.coefficient(*target);
            work.erase(*target);
            work.add(rewrite_once(*target), c);
        }
    }

    [[nodiscard]] lin_comb straighten(const monomial& b)
    {
        if (auto it = memo_.find(b); it != memo_.end()) {
            return it->second;
        }
        lin_comb result = straighten(lin_comb(b));
        memo_.emplace(b, result);
        return result;
    }

    /// Expresses a non-admissible, non-annihilated b v_r through strictly
    /// greater monomials of the same degree and weight.
    [[nodiscard]] lin_comb rewrite_once(const monomial& b)
    {
        if (annihilates(b, setup_)) {
            throw std::invalid_argument("rewrite_once: monomial annihilates v_r");
        }
        const auto& fs = b.factors();
        const auto w = grade(b, setup_.rank).weight;
        // Scan from the right (largest factor) for the first violation.
        for (std::size_t k = fs.size(); k-- > 0;) {
            const int color = fs[k].color;
            const bool rightmost_of_color = k + 1 == fs.size() || fs[k + 1].color != color;
            if (rightmost_of_color && fs[k].depth < initial_bound(w, color, setup_)) {
                return checked(b, rewrite_initial(b, k));
            }
            if (k > 0 && fs[k - 1].color == color && fs[k - 1].depth < fs[k].depth + 2) {
                return checked(b, rewrite_difference(b, k - 1));
            }
        }
        throw std::invalid_argument("rewrite_once: monomial is admissible");
    }

    [[nodiscard]] const setup& config() const noexcept { return setup_; }

private:
    // b = b' x_j(-m) x_j(-m') with m' <= m <= m' + 1 at positions (left, left+1).
    lin_comb rewrite_difference(const monomial& b, std::size_t left)
    {
        const auto& fs = b.factors();
        const int color = fs[left].color;
        relation_instance rel{color, color, fs[left].depth + fs[left + 1].depth, b.without(left + 1).without(left)};
        lin_comb terms = relation_terms(rel, setup_);
        const rational own = terms.coefficient(b);
        if (own.is_zero()) {
            throw inconsistency_error("rewrite_difference: source monomial missing from its relation");
        }
        terms.erase(b);
        lin_comb out;
        out.add(terms, -rational{1} / own);
        return out;
    }

    // b = b2 x_j(-m) b1, b1 holding every factor of color < j, x_j(-m) at
    // position k violating the initial condition.
    lin_comb rewrite_initial(const monomial& b, std::size_t k)
    {
        const auto& fs = b.factors();
        if (k + 1 == fs.size()) {
            // No smaller colors: x_j(-m) v_r = 0 would have been caught by annihilates().
            throw inconsistency_error("rewrite_initial: empty lower part without annihilation");
        }
        const factor top = fs[k];
        const factor partner = fs[k + 1];  // smallest factor of b1
        const int big_m = top.depth + partner.depth;

        std::vector<factor> upper(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(k));
        std::vector<factor> lower_rest(fs.begin() + static_cast<std::ptrdiff_t>(k) + 2, fs.end());
        const monomial b2 = monomial::make(upper);
        const monomial b1_rest = monomial::make(lower_rest);
        const monomial context = b2 * b1_rest;

        lin_comb out;
        for (int a = 1; a < big_m; ++a) {
            const int n = big_m - a;
            if (a == top.depth || kills_vacuum(top.color, a, setup_) || kills_vacuum(partner.color, n, setup_)) {
                continue;
            }
            if (a > top.depth) {
                out.add(context * monomial::make({{top.color, a}, {partner.color, n}}), -1);
                continue;
            }
            // Shorter lower part: straighten x_j(-a) b1' first, then restore
            // b2 x_k(-n) in front.
            const lin_comb sub = straighten(b1_rest.times({top.color, a}));
            const monomial outer = b2.times({partner.color, n});
            for (const auto& [t, c] : sub.terms()) {
                out.add(outer * t, -c);
            }
        }
        return out;
    }

    lin_comb checked(const monomial& source, lin_comb replacement)
    {
        const auto g = grade(source, setup_.rank);
        for (const auto& [m, c] : replacement.terms()) {
            if (!(source < m)) {
                throw inconsistency_error("rewrite produced a monomial not greater than " + source.str());
            }
            const auto gm = grade(m, setup_.rank);
            if (gm.degree != g.degree || gm.weight != g.weight) {
                throw inconsistency_error("rewrite changed the grading of " + source.str());
            }
        }
        if (observer_) {
            observer_(source, replacement);
        }
        return replacement;
    }

    setup setup_;
    step_observer observer_;
    std::map<monomial, lin_comb> memo_;
};

inline lin_comb straighten_by_rewriting(const lin_comb& v, const setup& s, rewriter::step_observer observer = {})
{
    rewriter rw(s, std::move(observer));
    return rw.straighten(v);
}

/// The linear system of one (weight, degree) sector: every PBW monomial as a
/// column, every relation instance and annihilation as a row.
struct sector_system {
    weight_vector weight;
    int degree = 0;
    std::vector<monomial> columns;           // non-admissible first, then admissible
    std::size_t admissible_begin = 0;        // index of the first admissible column
    std::size_t relation_rank = 0;
    std::map<monomial, lin_comb> reductions; // each non-admissible column in admissible terms
};

namespace detail {

inline std::vector<lin_comb> sector_relations(const setup& s, const weight_vector& w, int degree,
                                              const std::vector<monomial>& pbw)
{
    std::vector<lin_comb> rows;
    for (const auto& m : pbw) {
        if (annihilates(m, s)) {
            rows.emplace_back(m);
        }
    }
    for (int i = 1; i <= s.rank; ++i) {
        for (int j = i; j <= s.rank; ++j) {
            std::vector<int> rest = w.n;
            if (--rest[static_cast<std::size_t>(i - 1)] < 0 || --rest[static_cast<std::size_t>(j - 1)] < 0) {
                continue;
            }
            const weight_vector context_weight(rest);
            for (int big_m = 2; big_m <= degree; ++big_m) {
                for (const auto& ctx : enumerate_pbw(context_weight, degree - big_m)) {
                    auto row = relation_terms({i, j, big_m, ctx}, s);
                    if (!row.empty()) {
                        rows.push_back(std::move(row));
                    }
                }
            }
        }
    }
    return rows;
}

}  // namespace detail

/// Builds and solves one sector. Throws inconsistency_error if an admissible
/// monomial is forced to be dependent or a non-admissible one stays free.
inline sector_system solve_sector(const setup& s, const weight_vector& w, int degree)
{
    sector_system sys;
    sys.weight = w;
    sys.degree = degree;
    const auto pbw = enumerate_pbw(w, degree);
    for (const auto& m : pbw) {
        if (!is_admissible(m, s)) {
            sys.columns.push_back(m);
        }
    }
    sys.admissible_begin = sys.columns.size();
    for (const auto& m : pbw) {
        if (is_admissible(m, s)) {
            sys.columns.push_back(m);
        }
    }
    std::map<monomial, std::size_t> index;
    for (std::size_t c = 0; c < sys.columns.size(); ++c) {
        index.emplace(sys.columns[c], c);
    }

    const auto rows = detail::sector_relations(s, w, degree, pbw);
    std::vector<std::vector<linalg::big_rational>> matrix;
    matrix.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<linalg::big_rational> dense(sys.columns.size());
        for (const auto& [m, c] : row.terms()) {
            dense[index.at(m)] = linalg::to_big(c);
        }
        matrix.push_back(std::move(dense));
    }
    const auto pivots = linalg::rref(matrix, sys.columns.size());
    sys.relation_rank = pivots.size();

    for (const std::size_t p : pivots) {
        if (p >= sys.admissible_begin) {
            throw inconsistency_error("elimination: admissible monomial " + sys.columns[p].str() + " is dependent");
        }
    }
    if (pivots.size() != sys.admissible_begin) {
        throw inconsistency_error("elimination: a non-admissible monomial is not reducible");
    }
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        lin_comb value;
        for (std::size_t c = sys.admissible_begin; c < sys.columns.size(); ++c) {
            if (matrix[r][c] != 0) {
                value.add(sys.columns[c], -linalg::from_big(matrix[r][c]));
            }
        }
        sys.reductions.emplace(sys.columns[r], std::move(value));
    }
    return sys;
}

/// Reference normal form: reduces each term modulo the sector's relation
/// row space, with admissible monomials as the free coordinates.
inline lin_comb straighten_by_elimination(const lin_comb& v, const setup& s)
{
    std::map<std::pair<weight_vector, int>, sector_system> systems;
    lin_comb out;
    for (const auto& [m, c] : v.terms()) {
        if (is_admissible(m, s)) {
            out.add(m, c);
            continue;
        }
        const auto g = grade(m, s.rank);
        auto key = std::make_pair(g.weight, g.degree);
        auto it = systems.find(key);
        if (it == systems.end()) {
            it = systems.emplace(key, solve_sector(s, g.weight, g.degree)).first;
        }
        out.add(it->second.reductions.at(m), c);
    }
    return out;
}

}  // namespace fsbasis
