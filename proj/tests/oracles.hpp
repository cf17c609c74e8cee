#pragma once

// Independent reference computations. Nothing here calls the library code
// under test beyond its value types.

#include "capdesc/bigq.hpp"
#include "capdesc/partitions.hpp"
#include "capdesc/qseries.hpp"
#include "capdesc/rational_function.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using capdesc::BigQ;
using capdesc::Poly3;
using capdesc::RF3;

// Partitions as weakly decreasing sequences, found by filtering every
// composition of d.
inline std::vector<std::vector<int>> brute_partitions(int d) {
    std::vector<std::vector<int>> out;
    if (d == 0) return {{}};
    std::vector<int> cur;
    std::function<void(int)> go = [&](int left) {
        if (left == 0) {
            if (std::is_sorted(cur.rbegin(), cur.rend())) out.push_back(cur);
            return;
        }
        for (int p = 1; p <= left; ++p) {
            cur.push_back(p);
            go(left - p);
            cur.pop_back();
        }
    };
    go(d);
    return out;
}

// Count by recursion on the largest part; independent of the enumerator and
// cheap enough for d <= 20.
inline long brute_partition_count(int d, int max_part = -1) {
    if (max_part < 0) max_part = d;
    if (d == 0) return 1;
    long n = 0;
    for (int p = std::min(d, max_part); p >= 1; --p) n += brute_partition_count(d - p, p);
    return n;
}

// |centralizer of σ| = n! / |conjugacy class of σ|, class size counted by
// walking all permutations of n.
inline long centralizer_by_counting(const std::vector<int>& cycle_type) {
    const int n = std::accumulate(cycle_type.begin(), cycle_type.end(), 0);
    std::vector<int> target = cycle_type;
    std::sort(target.begin(), target.end());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    long total = 0, in_class = 0;
    do {
        ++total;
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        std::vector<int> type;
        for (int i = 0; i < n; ++i) {
            if (seen[static_cast<std::size_t>(i)]) continue;
            int len = 0;
            for (int j = i; !seen[static_cast<std::size_t>(j)]; j = perm[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = true;
                ++len;
            }
            type.push_back(len);
        }
        std::sort(type.begin(), type.end());
        if (type == target) ++in_class;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / in_class;
}

// Balanced markings of one compact edge of degree d: ordered pairs of
// partitions.
inline std::set<std::pair<std::vector<int>, std::vector<int>>> brute_edge_markings(int d) {
    std::set<std::pair<std::vector<int>, std::vector<int>>> out;
    for (const auto& a : brute_partitions(d))
        for (const auto& b : brute_partitions(d)) out.insert({a, b});
    return out;
}

inline Poly3 s(int i) { return Poly3::var(i - 1); }
inline Poly3 c(long v) { return Poly3(BigQ(v, 1)); }

// Rank over Q by plain Gaussian elimination.
inline long rank_q(std::vector<std::vector<BigQ>> m) {
    long rank = 0;
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (std::size_t col = 0, r = 0; col < cols && r < rows; ++col) {
        std::size_t p = r;
        while (p < rows && m[p][col].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][col].is_zero()) continue;
            const BigQ f = m[i][col] / m[r][col];
            for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

// Power series of N/D over Q-coefficients in RF3, D(0) != 0, terms 0..len-1.
inline std::vector<RF3> expand_ratio(const std::vector<RF3>& num, const std::vector<RF3>& den, std::size_t len) {
    std::vector<RF3> out(len);
    const RF3 inv = RF3(1) / den[0];
    for (std::size_t k = 0; k < len; ++k) {
        RF3 acc = k < num.size() ? num[k] : RF3(0);
        for (std::size_t j = 1; j <= k && j < den.size(); ++j) acc -= den[j] * out[k - j];
        out[k] = acc * inv;
    }
    return out;
}

inline std::vector<RF3> poly_mul(const std::vector<RF3>& a, const std::vector<RF3>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<RF3> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    while (!r.empty() && r.back().is_zero()) r.pop_back();
    return r;
}

// Random q-polynomial of the given degree with small integer coefficients;
// `constant_one` forces the constant term to 1.
inline std::vector<RF3> random_qpoly(std::mt19937_64& rng, int degree, bool constant_one) {
    std::uniform_int_distribution<long> coef(-4, 4);
    std::vector<RF3> p(static_cast<std::size_t>(degree + 1));
    for (auto& x : p) x = RF3(Poly3(BigQ(coef(rng), 1)));
    if (constant_one) p[0] = RF3(1);
    if (p.back().is_zero()) p.back() = RF3(1);
    return p;
}

}  // namespace oracle
