#pragma once

// Exact elimination: fraction-free (Bareiss) rank over the integers and
// reduced row echelon form over arbitrary-precision rationals.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rational.hpp"

namespace fsbasis::linalg {

using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;

inline big_rational to_big(const rational& q) { return big_rational(big_int(q.num()), big_int(q.den())); }

inline rational from_big(const big_rational& q)
{
    const big_int n = boost::multiprecision::numerator(q);
    const big_int d = boost::multiprecision::denominator(q);
    constexpr auto lo = std::numeric_limits<std::int64_t>::min();
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) {
        throw std::overflow_error("linalg: value does not fit a 64-bit rational");
    }
    return {n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>()};
}

/// Rank of a rational matrix given as rows of equal length. Each row is
/// scaled to a primitive integer row, then Bareiss elimination runs with exact
/// integer division only.
inline std::size_t exact_rank(const std::vector<std::vector<rational>>& rows)
{
    if (rows.empty()) {
        return 0;
    }
    const std::size_t cols = rows.front().size();
    std::vector<std::vector<big_int>> m;
    m.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.size() != cols) {
            throw std::invalid_argument("exact_rank: ragged matrix");
        }
        big_int scale = 1;
        for (const auto& q : row) {
            scale = boost::multiprecision::lcm(scale, big_int(q.den()));
        }
        std::vector<big_int> ints;
        ints.reserve(cols);
        for (const auto& q : row) {
            ints.push_back(big_int(q.num()) * (scale / q.den()));
        }
        m.push_back(std::move(ints));
    }

    std::size_t rank = 0;
    big_int prev_pivot = 1;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == m.size()) {
            continue;
        }
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            for (std::size_t c = col + 1; c < cols; ++c) {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev_pivot;
            }
            m[r][col] = 0;
        }
        prev_pivot = m[rank][col];
        ++rank;
    }
    return rank;
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row, in row order. Zero rows are dropped.
inline std::vector<std::size_t> rref(std::vector<std::vector<big_rational>>& m, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == m.size()) {
            continue;
        }
        std::swap(m[pivot], m[rank]);
        const big_rational inv = 1 / m[rank][col];
        for (std::size_t c = col; c < cols; ++c) {
            m[rank][c] *= inv;
        }
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][col] == 0) {
                continue;
            }
            const big_rational f = m[r][col];
            for (std::size_t c = col; c < cols; ++c) {
                if (m[rank][c] != 0) {
                    m[r][c] -= f * m[rank][c];
                }
            }
        }
        pivots.push_back(col);
        ++rank;
    }
    m.resize(rank);
    return pivots;
}

}  // namespace fsbasis::linalg
