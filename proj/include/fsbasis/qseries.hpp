#pragma once

// Truncated power series in q with exact integer coefficients, and the graded
// characters of W(Lambda_r).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "combinatorics.hpp"

namespace fsbasis {

/// c_0 + c_1 q + ... + c_T q^T + O(q^{T+1}).
///
/// The truncation order travels with the value: binary operations return a
/// series of order min(T_a, T_b). Coefficient arithmetic is overflow checked.
class qseries {
public:
    using coeff_type = std::int64_t;

    explicit qseries(int order = 0) : coeffs_(checked_size(order), 0) {}
    qseries(std::vector<coeff_type> coeffs, int order) : coeffs_(checked_size(order), 0)
    {
        if (coeffs.size() > coeffs_.size()) {
            coeffs.resize(coeffs_.size());
        }
        std::copy(coeffs.begin(), coeffs.end(), coeffs_.begin());
    }

    static qseries one(int order) { return monomial_term(0, 1, order); }
    /// c q^e truncated at `order` (zero when e > order).
    static qseries monomial_term(int exponent, coeff_type c, int order)
    {
        qseries s(order);
        if (exponent < 0) {
            throw std::invalid_argument("qseries: negative exponent");
        }
        if (exponent <= order) {
            s.coeffs_[static_cast<std::size_t>(exponent)] = c;
        }
        return s;
    }

    [[nodiscard]] int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] coeff_type operator[](int e) const
    {
        if (e < 0 || e > order()) {
            throw std::out_of_range("qseries: exponent beyond truncation order");
        }
        return coeffs_[static_cast<std::size_t>(e)];
    }
    [[nodiscard]] const std::vector<coeff_type>& coefficients() const noexcept { return coeffs_; }

    /// Lowest exponent with a nonzero coefficient, or -1 for the zero series.
    [[nodiscard]] int valuation() const noexcept
    {
        for (std::size_t e = 0; e < coeffs_.size(); ++e) {
            if (coeffs_[e] != 0) {
                return static_cast<int>(e);
            }
        }
        return -1;
    }
    [[nodiscard]] bool is_zero() const noexcept { return valuation() < 0; }

    [[nodiscard]] qseries truncated(int order) const
    {
        if (order > this->order()) {
            throw std::invalid_argument("qseries: cannot raise the truncation order");
        }
        return {coeffs_, order};
    }

    friend qseries operator+(const qseries& a, const qseries& b)
    {
        qseries r(std::min(a.order(), b.order()));
        for (std::size_t e = 0; e < r.coeffs_.size(); ++e) {
            r.coeffs_[e] = add(a.coeffs_[e], b.coeffs_[e]);
        }
        return r;
    }
    friend qseries operator-(const qseries& a)
    {
        qseries r = a;
        for (auto& c : r.coeffs_) {
            c = mul(c, -1);
        }
        return r;
    }
    friend qseries operator-(const qseries& a, const qseries& b) { return a + (-b); }
    friend qseries operator*(const qseries& a, const qseries& b)
    {
        qseries r(std::min(a.order(), b.order()));
        const std::size_t n = r.coeffs_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (a.coeffs_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; i + j < n; ++j) {
                r.coeffs_[i + j] = add(r.coeffs_[i + j], mul(a.coeffs_[i], b.coeffs_[j]));
            }
        }
        return r;
    }

    /// a / b for b with constant term +1 or -1, so the quotient stays integral.
    /// Throws std::domain_error when the constant term of b is zero.
    [[nodiscard]] qseries divided_by_unit(const qseries& b) const
    {
        const coeff_type b0 = b.coeffs_.front();
        if (b0 == 0) {
            throw std::domain_error("qseries: division by a series with zero constant term");
        }
        if (b0 != 1 && b0 != -1) {
            throw std::domain_error("qseries: constant term is not a unit in Z");
        }
        qseries r(std::min(order(), b.order()));
        for (std::size_t e = 0; e < r.coeffs_.size(); ++e) {
            coeff_type acc = coeffs_[e];
            for (std::size_t k = 1; k <= e; ++k) {
                acc = add(acc, mul(-b.coeffs_[k], r.coeffs_[e - k]));
            }
            r.coeffs_[e] = mul(acc, b0);  // 1/b0 == b0 for units
        }
        return r;
    }

    /// Multiplication by q^k, k >= 0; the order is unchanged.
    [[nodiscard]] qseries shifted(int k) const
    {
        if (k < 0) {
            throw std::invalid_argument("qseries: negative shift");
        }
        qseries r(order());
        for (std::size_t e = static_cast<std::size_t>(k); e < r.coeffs_.size(); ++e) {
            r.coeffs_[e] = coeffs_[e - static_cast<std::size_t>(k)];
        }
        return r;
    }

    qseries& operator+=(const qseries& o) { return *this = *this + o; }
    qseries& operator*=(const qseries& o) { return *this = *this * o; }

    friend bool operator==(const qseries&, const qseries&) = default;

    /// "1 + q + 2q^4 + O(q^7)"-style rendering without the O-term.
    [[nodiscard]] std::string str() const
    {
        std::string out;
        for (std::size_t e = 0; e < coeffs_.size(); ++e) {
            const coeff_type c = coeffs_[e];
            if (c == 0) {
                continue;
            }
            const coeff_type mag = c < 0 ? -c : c;
            if (out.empty()) {
                out += c < 0 ? "-" : "";
            } else {
                out += c < 0 ? " - " : " + ";
            }
            if (e == 0 || mag != 1) {
                out += std::to_string(mag);
            }
            if (e == 1) {
                out += "q";
            } else if (e > 1) {
                out += "q^" + std::to_string(e);
            }
        }
        return out.empty() ? "0" : out;
    }

    friend std::ostream& operator<<(std::ostream& os, const qseries& s) { return os << s.str(); }

private:
    static std::size_t checked_size(int order)
    {
        if (order < 0) {
            throw std::invalid_argument("qseries: negative truncation order");
        }
        return static_cast<std::size_t>(order) + 1;
    }
    static coeff_type add(coeff_type a, coeff_type b)
    {
        coeff_type r = 0;
        if (__builtin_add_overflow(a, b, &r)) {
            throw std::overflow_error("qseries: coefficient overflow");
        }
        return r;
    }
    static coeff_type mul(coeff_type a, coeff_type b)
    {
        coeff_type r = 0;
        if (__builtin_mul_overflow(a, b, &r)) {
            throw std::overflow_error("qseries: coefficient overflow");
        }
        return r;
    }

    std::vector<coeff_type> coeffs_;
};

/// (1 - q)(1 - q^2)...(1 - q^n) truncated at `order`.
inline qseries pochhammer(int n, int order)
{
    if (n < 0) {
        throw std::invalid_argument("pochhammer: negative n");
    }
    qseries p = qseries::one(order);
    for (int k = 1; k <= n; ++k) {
        p *= qseries::one(order) - qseries::monomial_term(k, 1, order);
    }
    return p;
}

/// Closed product form q^{min_degree(w)} / ((q)_{n_1} ... (q)_{n_l}).
inline qseries fermionic_character(const setup& s, const weight_vector& w, int order)
{
    const int lowest = min_degree(w, s);
    if (lowest > order) {
        return qseries(order);
    }
    qseries denominator = qseries::one(order);
    for (int c : w.n) {
        denominator *= pochhammer(c, order);
    }
    return qseries::monomial_term(lowest, 1, order).divided_by_unit(denominator);
}

/// Counts admissible monomials of weight w by degree.
inline qseries enumerative_character(const setup& s, const weight_vector& w, int order)
{
    qseries out(order);
    std::vector<qseries::coeff_type> counts(static_cast<std::size_t>(order) + 1, 0);
    for (const auto& m : enumerate_admissible(s, order, w)) {
        ++counts[static_cast<std::size_t>(m.degree())];
    }
    return {counts, order};
}

enum class character_method { fermionic, enumerative };

/// chi^w for every weight with min_degree(w) <= order.
struct character_table {
    fsbasis::setup setup;
    int order = 0;
    std::map<weight_vector, qseries> entries;

    [[nodiscard]] qseries total() const
    {
        qseries sum(order);
        for (const auto& [w, chi] : entries) {
            sum += chi;
        }
        return sum;
    }
};

inline character_table character_table_for(const setup& s, int order,
                                            character_method method = character_method::fermionic)
{
    character_table table{s, order, {}};
    for (const auto& w : weights_with_min_degree_at_most(s, order)) {
        table.entries.emplace(w, method == character_method::fermionic ? fermionic_character(s, w, order)
                                                                       : enumerative_character(s, w, order));
    }
    return table;
}

/// Sum of chi^w over all weights; exact mod q^{order+1} because weights with
/// min_degree(w) > order contribute nothing below that order.
inline std::pair<qseries, character_table> full_character(const setup& s, int order,
                                                          character_method method = character_method::fermionic)
{
    auto table = character_table_for(s, order, method);
    auto sum = table.total();
    return {std::move(sum), std::move(table)};
}

// JSON forms. A series is {"order": T, "terms": [[e, c], ...]} listing the
// nonzero coefficients by ascending exponent; a table maps "n1,...,nl" to a
// series.

inline nlohmann::json to_json(const qseries& s)
{
    nlohmann::json terms = nlohmann::json::array();
    for (int e = 0; e <= s.order(); ++e) {
        if (s[e] != 0) {
            terms.push_back({e, s[e]});
        }
    }
    return {{"order", s.order()}, {"terms", terms}};
}

inline qseries qseries_from_json(const nlohmann::json& j)
{
    const int order = j.at("order").get<int>();
    std::vector<qseries::coeff_type> coeffs(static_cast<std::size_t>(order) + 1, 0);
    for (const auto& t : j.at("terms")) {
        const int e = t.at(0).get<int>();
        if (e < 0 || e > order) {
            throw std::invalid_argument("qseries json: exponent outside 0..order");
        }
        coeffs[static_cast<std::size_t>(e)] = t.at(1).get<qseries::coeff_type>();
    }
    return {coeffs, order};
}

inline nlohmann::json to_json(const character_table& t)
{
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [w, chi] : t.entries) {
        entries[w.key()] = to_json(chi);
    }
    return {{"rank", t.setup.rank}, {"module", t.setup.module_index}, {"order", t.order}, {"entries", entries}};
}

inline character_table character_table_from_json(const nlohmann::json& j)
{
    character_table t;
    t.setup = setup(j.at("rank").get<int>(), j.at("module").get<int>());
    t.order = j.at("order").get<int>();
    for (const auto& [key, value] : j.at("entries").items()) {
        t.entries.emplace(weight_vector::parse(key, t.setup.rank), qseries_from_json(value));
    }
    return t;
}

}  // namespace fsbasis
