#pragma once

// Deliberately naive reference computations, written straight from the
// definitions and sharing no code with the library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace brute {

struct term {
    int color;
    int depth;
};
using word = std::vector<term>;

// Every multiset of factors x_c(-m), 1 <= c <= rank, with depth sum <= max_degree.
inline std::vector<word> all_words(int rank, int max_degree)
{
    std::vector<word> out;
    word cur;
    std::function<void(int, int, int)> rec = [&](int color, int depth, int budget) {
        out.push_back(cur);
        for (int c = color; c <= rank; ++c) {
            for (int m = (c == color ? depth : 1); m <= budget; ++m) {
                cur.push_back({c, m});
                rec(c, m, budget - m);
                cur.pop_back();
            }
        }
    };
    rec(1, 1, max_degree);
    return out;
}

inline int degree(const word& w)
{
    int d = 0;
    for (const auto& t : w) {
        d += t.depth;
    }
    return d;
}

inline std::vector<int> counts(const word& w, int rank)
{
    std::vector<int> n(static_cast<std::size_t>(rank), 0);
    for (const auto& t : w) {
        ++n[static_cast<std::size_t>(t.color - 1)];
    }
    return n;
}

// DC within every color, and IC imposed on every factor of each color.
inline bool admissible(const word& w, int rank, int r)
{
    const auto n = counts(w, rank);
    for (int j = 1; j <= rank; ++j) {
        std::vector<int> depths;
        for (const auto& t : w) {
            if (t.color == j) {
                depths.push_back(t.depth);
            }
        }
        std::sort(depths.begin(), depths.end());
        int bound = 1 + (j <= r ? 1 : 0);
        for (int i = 1; i < j; ++i) {
            bound += n[static_cast<std::size_t>(i - 1)];
        }
        for (std::size_t k = 0; k < depths.size(); ++k) {
            if (depths[k] < bound) {
                return false;
            }
            if (k > 0 && depths[k] - depths[k - 1] < 2) {
                return false;
            }
        }
    }
    return true;
}

// Partitions of d into distinct parts >= min_part with no two consecutive,
// counted as subsets of {1..d} by bitmask.
inline std::int64_t gap_two_partitions(int d, int min_part)
{
    std::int64_t count = 0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        if ((mask & (mask >> 1)) != 0) {
            continue;
        }
        int sum = 0;
        bool ok = true;
        for (int p = 1; p <= d; ++p) {
            if ((mask >> (p - 1)) & 1u) {
                sum += p;
                ok = ok && p >= min_part;
            }
        }
        if (ok && sum == d) {
            ++count;
        }
    }
    return count;
}

// Number of partitions of k with all parts <= max_part.
inline std::int64_t bounded_partitions(int k, int max_part)
{
    if (k == 0) {
        return 1;
    }
    if (k < 0 || max_part == 0) {
        return 0;
    }
    return bounded_partitions(k - max_part, max_part) + bounded_partitions(k, max_part - 1);
}

// Coefficient of q^k in 1/((q)_{n_1} ... (q)_{n_l}): tuples of partitions,
// the i-th with parts <= n_i, of total size k.
inline std::int64_t partition_tuples(const std::vector<int>& n, int k, std::size_t from = 0)
{
    if (from == n.size()) {
        return k == 0 ? 1 : 0;
    }
    std::int64_t total = 0;
    for (int part = 0; part <= k; ++part) {
        total += bounded_partitions(part, n[from]) * partition_tuples(n, k - part, from + 1);
    }
    return total;
}

// The closed-form exponent, typed in independently.
inline int numerator_exponent(const std::vector<int>& n, int r)
{
    int e = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        e += n[i] * n[i];
        for (std::size_t j = i + 1; j < n.size(); ++j) {
            e += n[i] * n[j];
        }
        if (static_cast<int>(i) + 1 <= r) {
            e += n[i];
        }
    }
    return e;
}

// Partitions of k as multiplicity maps part -> count.
inline std::vector<std::map<int, int>> partitions(int k)
{
    std::vector<std::map<int, int>> out;
    std::map<int, int> cur;
    std::function<void(int, int)> rec = [&](int left, int largest) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(left, largest); p >= 1; --p) {
            ++cur[p];
            rec(left - p, p);
            if (--cur[p] == 0) {
                cur.erase(p);
            }
        }
    };
    rec(k, k);
    return out;
}

// z_lambda = prod_i i^{m_i} m_i!, so [z^k] exp(sum_n a(-n) z^n / n) =
// sum_lambda a(-lambda) / z_lambda.
inline std::int64_t z_lambda(const std::map<int, int>& lambda)
{
    std::int64_t z = 1;
    for (const auto& [part, mult] : lambda) {
        for (int k = 1; k <= mult; ++k) {
            z *= static_cast<std::int64_t>(part) * k;
        }
    }
    return z;
}

}  // namespace brute
