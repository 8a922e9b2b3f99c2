#pragma once

// Monomials in the commuting operators x_i(-m), their reverse-lexicographic
// order, gradings, and the admissible (particle) monomials of W(Lambda_r).

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fsbasis {

/// Rank l of sl(l+1) and the index r of the level 1 module L(Lambda_r).
struct setup {
    int rank = 1;
    int module_index = 0;

    setup() = default;
    setup(int l, int r) : rank(l), module_index(r)
    {
        if (l < 1) {
            throw std::invalid_argument("setup: rank must be >= 1");
        }
        if (r < 0 || r > l) {
            throw std::invalid_argument("setup: module index must lie in 0..rank");
        }
    }

    /// 1 if color i acts with an extra shift on v_r (i <= r), else 0.
    [[nodiscard]] int delta(int color) const noexcept { return color <= module_index ? 1 : 0; }

    friend bool operator==(const setup&, const setup&) = default;
};

/// The operator x_color(-depth).
struct factor {
    int color = 1;
    int depth = 1;

    friend bool operator==(const factor&, const factor&) = default;
};

/// Factor order: x_i(-m) < x_j(-n) iff i > j, or i == j and m > n.
inline std::strong_ordering compare_factors(const factor& a, const factor& b) noexcept
{
    if (a.color != b.color) {
        return b.color <=> a.color;
    }
    return b.depth <=> a.depth;
}

/// Multiplicities (n_1, ..., n_l) of the colors; w(b) = sum n_i gamma_i.
struct weight_vector {
    std::vector<int> n;

    weight_vector() = default;
    explicit weight_vector(std::vector<int> counts) : n(std::move(counts))
    {
        if (std::any_of(n.begin(), n.end(), [](int c) { return c < 0; })) {
            throw std::invalid_argument("weight_vector: negative multiplicity");
        }
    }
    static weight_vector zero(int rank) { return weight_vector(std::vector<int>(static_cast<std::size_t>(rank), 0)); }

    [[nodiscard]] int rank() const noexcept { return static_cast<int>(n.size()); }
    [[nodiscard]] int operator[](int color) const { return n.at(static_cast<std::size_t>(color - 1)); }
    [[nodiscard]] int length() const noexcept
    {
        int s = 0;
        for (int c : n) {
            s += c;
        }
        return s;
    }

    /// "n1,n2,...", the key format used by character tables.
    [[nodiscard]] std::string key() const
    {
        std::string out;
        for (std::size_t i = 0; i < n.size(); ++i) {
            if (i != 0) {
                out += ',';
            }
            out += std::to_string(n[i]);
        }
        return out;
    }

    static weight_vector parse(std::string_view text, int rank)
    {
        std::vector<int> counts;
        std::string token;
        std::istringstream in{std::string(text)};
        while (std::getline(in, token, ',')) {
            std::size_t used = 0;
            int value = 0;
            try {
                value = std::stoi(token, &used);
            } catch (const std::logic_error&) {
                throw std::invalid_argument("weight: malformed entry '" + token + "'");
            }
            if (used != token.size()) {
                throw std::invalid_argument("weight: malformed entry '" + token + "'");
            }
            counts.push_back(value);
        }
        if (static_cast<int>(counts.size()) != rank) {
            throw std::invalid_argument("weight: expected " + std::to_string(rank) + " entries, got " +
                                        std::to_string(counts.size()));
        }
        return weight_vector(std::move(counts));
    }

    friend auto operator<=>(const weight_vector&, const weight_vector&) = default;
};

struct grading {
    int degree = 0;
    weight_vector weight;
    int length = 0;

    friend bool operator==(const grading&, const grading&) = default;
};

/// A product of commuting factors, stored in canonical order: read left to
/// right the factors increase, so the rightmost factor is the largest.
/// Comparison is the reverse lexicographic order (factors compared from the
/// right; a monomial is smaller than any of its left extensions).
class monomial {
public:
    monomial() = default;

    /// Canonicalizes an arbitrary multiset of factors. Validates depth >= 1
    /// and, when rank > 0, colors in 1..rank.
    static monomial make(std::vector<factor> factors, int rank = 0)
    {
        for (const auto& f : factors) {
            if (f.depth < 1) {
                throw std::invalid_argument("monomial: depth must be >= 1");
            }
            if (f.color < 1 || (rank > 0 && f.color > rank)) {
                throw std::invalid_argument("monomial: color out of range");
            }
        }
        monomial m;
        m.factors_ = std::move(factors);
        std::sort(m.factors_.begin(), m.factors_.end(),
                  [](const factor& a, const factor& b) { return compare_factors(a, b) < 0; });
        return m;
    }

    [[nodiscard]] const std::vector<factor>& factors() const noexcept { return factors_; }
    [[nodiscard]] bool empty() const noexcept { return factors_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return factors_.size(); }

    [[nodiscard]] int degree() const noexcept
    {
        int d = 0;
        for (const auto& f : factors_) {
            d += f.depth;
        }
        return d;
    }

    /// Product of two monomials (multiset union).
    friend monomial operator*(const monomial& a, const monomial& b)
    {
        monomial m;
        m.factors_.reserve(a.size() + b.size());
        std::merge(a.factors_.begin(), a.factors_.end(), b.factors_.begin(), b.factors_.end(),
                   std::back_inserter(m.factors_),
                   [](const factor& x, const factor& y) { return compare_factors(x, y) < 0; });
        return m;
    }

    [[nodiscard]] monomial times(factor f) const { return *this * make({f}); }

    /// Removes one occurrence of the factor at canonical position idx.
    [[nodiscard]] monomial without(std::size_t idx) const
    {
        monomial m = *this;
        m.factors_.erase(m.factors_.begin() + static_cast<std::ptrdiff_t>(idx));
        return m;
    }

    friend bool operator==(const monomial&, const monomial&) = default;
    friend std::strong_ordering operator<=>(const monomial& a, const monomial& b)
    {
        auto ia = a.factors_.rbegin();
        auto ib = b.factors_.rbegin();
        for (; ia != a.factors_.rend() && ib != b.factors_.rend(); ++ia, ++ib) {
            if (auto c = compare_factors(*ia, *ib); c != 0) {
                return c;
            }
        }
        return a.size() <=> b.size();
    }

    /// Text form: "x2(-3) x1(-4) x1(-1)"; the empty monomial prints as "".
    [[nodiscard]] std::string str() const
    {
        std::string out;
        for (const auto& f : factors_) {
            if (!out.empty()) {
                out += ' ';
            }
            out += "x" + std::to_string(f.color) + "(-" + std::to_string(f.depth) + ")";
        }
        return out;
    }

    /// Parses whitespace separated tokens x<I>(-<M>) in any order.
    static monomial parse(std::string_view text, int rank = 0)
    {
        std::vector<factor> fs;
        std::size_t pos = 0;
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("monomial: " + why + " in '" + std::string(text) + "'");
        };
        auto read_int = [&](int& out) {
            const std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])) != 0) {
                ++pos;
            }
            if (pos == start || pos - start > 9) {
                fail("expected a number");
            }
            out = std::stoi(std::string(text.substr(start, pos - start)));
        };
        while (true) {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])) != 0) {
                ++pos;
            }
            if (pos == text.size()) {
                break;
            }
            factor f;
            if (text[pos] != 'x') {
                fail("token must start with 'x'");
            }
            ++pos;
            read_int(f.color);
            if (text.substr(pos, 2) != "(-") {
                fail("expected '(-'");
            }
            pos += 2;
            read_int(f.depth);
            if (pos >= text.size() || text[pos] != ')') {
                fail("expected ')'");
            }
            ++pos;
            if (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])) == 0) {
                fail("tokens must be separated by whitespace");
            }
            fs.push_back(f);
        }
        return make(std::move(fs), rank);
    }

    friend std::ostream& operator<<(std::ostream& os, const monomial& m) { return os << m.str(); }

private:
    std::vector<factor> factors_;
};

/// Convenience wrapper matching make(factors) with range checks against s.
inline monomial make_monomial(std::vector<factor> factors, const setup& s)
{
    return monomial::make(std::move(factors), s.rank);
}

inline grading grade(const monomial& b, int rank)
{
    grading g;
    g.weight = weight_vector::zero(rank);
    for (const auto& f : b.factors()) {
        if (f.color > rank) {
            throw std::invalid_argument("grade: color exceeds rank");
        }
        ++g.weight.n[static_cast<std::size_t>(f.color - 1)];
        g.degree += f.depth;
    }
    g.length = static_cast<int>(b.size());
    return g;
}

/// Lower bound 1 + sum_{i<j} n_i + delta_{j<=r} on the depths of color j.
inline int initial_bound(const weight_vector& w, int color, const setup& s)
{
    int below = 0;
    for (int i = 1; i < color; ++i) {
        below += w[i];
    }
    return 1 + below + s.delta(color);
}

/// Difference conditions (consecutive depths of one color differ by >= 2)
/// and initial conditions (every depth of color j is >= initial_bound).
inline bool is_admissible(const monomial& b, const setup& s)
{
    const auto g = grade(b, s.rank);
    const auto& fs = b.factors();
    for (std::size_t k = 0; k < fs.size(); ++k) {
        if (fs[k].depth < initial_bound(g.weight, fs[k].color, s)) {
            return false;
        }
        if (k + 1 < fs.size() && fs[k + 1].color == fs[k].color && fs[k].depth < fs[k + 1].depth + 2) {
            return false;
        }
    }
    return true;
}

/// sum n_i^2 + sum_{i<j} n_i n_j + sum_{i<=r} n_i: the degree of the smallest
/// admissible monomial of weight w.
inline int min_degree(const weight_vector& w, const setup& s)
{
    if (w.rank() != s.rank) {
        throw std::invalid_argument("min_degree: weight has wrong number of entries");
    }
    int total = 0;
    for (int i = 1; i <= s.rank; ++i) {
        total += w[i] * w[i];
        if (i <= s.module_index) {
            total += w[i];
        }
        for (int j = i + 1; j <= s.rank; ++j) {
            total += w[i] * w[j];
        }
    }
    return total;
}

namespace detail {

// Parts (ascending) of all partitions into exactly `parts` parts, each at least
// `min_part`, consecutive parts differing by at least `gap`, sum <= cap.
inline void gap_partitions(int parts, int min_part, int gap, int cap, std::vector<int>& cur,
                           std::vector<std::vector<int>>& out)
{
    if (parts == 0) {
        out.push_back(cur);
        return;
    }
    // Cheapest completion: min_part, min_part + gap, ...
    const int cheapest = parts * min_part + gap * parts * (parts - 1) / 2;
    if (cheapest > cap) {
        return;
    }
    for (int p = min_part; parts * p + gap * parts * (parts - 1) / 2 <= cap; ++p) {
        cur.push_back(p);
        gap_partitions(parts - 1, p + gap, gap, cap - p, cur, out);
        cur.pop_back();
    }
}

inline void weights_up_to(const setup& s, int cap, std::vector<int>& cur, std::vector<weight_vector>& out)
{
    if (static_cast<int>(cur.size()) == s.rank) {
        out.emplace_back(cur);
        return;
    }
    for (int c = 0;; ++c) {
        cur.push_back(c);
        std::vector<int> padded = cur;
        padded.resize(static_cast<std::size_t>(s.rank), 0);
        const bool fits = min_degree(weight_vector(padded), s) <= cap;
        if (fits) {
            weights_up_to(s, cap, cur, out);
        }
        cur.pop_back();
        if (!fits) {
            break;
        }
    }
}

// All monomials of the given weight with degree <= cap whose color-j depths
// form partitions produced by gap_partitions(n_j, min_part(j), gap, ...).
template <class MinPart>
std::vector<monomial> weight_sector(const weight_vector& w, int cap, int gap, MinPart min_part)
{
    const int rank = w.rank();
    std::vector<std::vector<std::vector<int>>> per_color(static_cast<std::size_t>(rank));
    std::vector<int> cheapest(static_cast<std::size_t>(rank), 0);
    int total_cheapest = 0;
    for (int j = 1; j <= rank; ++j) {
        const int n = w[j];
        const int lo = min_part(j);
        cheapest[static_cast<std::size_t>(j - 1)] = n * lo + gap * n * (n - 1) / 2;
        total_cheapest += cheapest[static_cast<std::size_t>(j - 1)];
    }
    if (total_cheapest > cap) {
        return {};
    }
    for (int j = 1; j <= rank; ++j) {
        std::vector<int> cur;
        const int own_cap = cap - (total_cheapest - cheapest[static_cast<std::size_t>(j - 1)]);
        gap_partitions(w[j], min_part(j), gap, own_cap, cur, per_color[static_cast<std::size_t>(j - 1)]);
    }
    std::vector<monomial> out;
    std::vector<factor> acc;
    std::function<void(int, int)> combine = [&](int color, int budget) {
        if (color > rank) {
            out.push_back(monomial::make(acc));
            return;
        }
        for (const auto& parts : per_color[static_cast<std::size_t>(color - 1)]) {
            int sum = 0;
            for (int p : parts) {
                sum += p;
            }
            if (sum > budget) {
                continue;
            }
            for (int p : parts) {
                acc.push_back({color, p});
            }
            combine(color + 1, budget - sum);
            acc.resize(acc.size() - parts.size());
        }
    };
    combine(1, cap);
    return out;
}

inline void sort_by_degree_then_order(std::vector<monomial>& ms)
{
    std::sort(ms.begin(), ms.end(), [](const monomial& a, const monomial& b) {
        const int da = a.degree();
        const int db = b.degree();
        return da != db ? da < db : a < b;
    });
}

}  // namespace detail

/// Every weight whose minimal admissible degree is at most cap.
inline std::vector<weight_vector> weights_with_min_degree_at_most(const setup& s, int cap)
{
    std::vector<weight_vector> out;
    std::vector<int> cur;
    if (cap >= 0) {
        detail::weights_up_to(s, cap, cur, out);
    }
    return out;
}

/// Admissible monomials of degree <= cap (of weight `only` when given),
/// ordered by ascending degree, then ascending monomial order.
inline std::vector<monomial> enumerate_admissible(const setup& s, int degree_cap,
                                                  const std::optional<weight_vector>& only = std::nullopt)
{
    if (degree_cap < 0) {
        throw std::invalid_argument("enumerate_admissible: negative degree cap");
    }
    std::vector<weight_vector> weights;
    if (only) {
        if (only->rank() != s.rank) {
            throw std::invalid_argument("enumerate_admissible: weight has wrong number of entries");
        }
        weights.push_back(*only);
    } else {
        weights = weights_with_min_degree_at_most(s, degree_cap);
    }
    std::vector<monomial> out;
    for (const auto& w : weights) {
        auto part = detail::weight_sector(w, degree_cap, 2, [&](int j) { return initial_bound(w, j, s); });
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    detail::sort_by_degree_then_order(out);
    return out;
}

/// Admissible monomials grouped by (weight, degree).
inline std::map<std::pair<weight_vector, int>, std::vector<monomial>> group_by_sector(
    const std::vector<monomial>& ms, int rank)
{
    std::map<std::pair<weight_vector, int>, std::vector<monomial>> out;
    for (const auto& m : ms) {
        const auto g = grade(m, rank);
        out[{g.weight, g.degree}].push_back(m);
    }
    return out;
}

/// All PBW monomials (depths >= 1, no further conditions) of the given
/// weight and exact degree, in ascending monomial order.
inline std::vector<monomial> enumerate_pbw(const weight_vector& w, int degree)
{
    auto all = detail::weight_sector(w, degree, 0, [](int) { return 1; });
    std::erase_if(all, [&](const monomial& m) { return m.degree() != degree; });
    std::sort(all.begin(), all.end());
    return all;
}

/// Every weight with sum n_i <= degree, i.e. every weight carrying PBW
/// monomials of that degree.
inline std::vector<weight_vector> pbw_weights(int rank, int degree)
{
    std::vector<weight_vector> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int budget) {
        if (static_cast<int>(cur.size()) == rank) {
            out.emplace_back(cur);
            return;
        }
        for (int c = 0; c <= budget; ++c) {
            cur.push_back(c);
            rec(budget - c);
            cur.pop_back();
        }
    };
    rec(degree);
    return out;
}

}  // namespace fsbasis
