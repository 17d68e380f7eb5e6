#pragma once

/// @file min_sum.hpp
/// @brief The quadruple sum  sum_{X/2 < n_i <= X} min(1, 1 / |n1^c + n2^c - n3^c - n4^c|)
/// as a certified interval.
///
/// All ordered pair values n1^c + n2^c go into one sorted table. Pairs of
/// pairs with gap <= 1 contribute exactly 1 each and are counted exactly;
/// pairs with gap in (2^j, 2^{j+1}] are counted per band and contribute
/// between 2^{-j-1} and 2^{-j} each.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pdi/error.hpp"

namespace pdi {

inline constexpr std::int64_t default_min_sum_cap = 4096;

/// Sorted values n1^c + n2^c with per-entry weights.
struct PairSumTable {
    std::vector<double> values;
    std::vector<double> weights;
};

/// All ordered pairs of integers in (X/2, X], weight 1.
inline PairSumTable integer_pair_table(std::int64_t X, double c) {
    std::vector<double> pw;
    for (std::int64_t n = X / 2 + 1; n <= X; ++n) pw.push_back(std::pow(static_cast<double>(n), c));
    PairSumTable t;
    t.values.reserve(pw.size() * pw.size());
    for (double a : pw)
        for (double b : pw) t.values.push_back(a + b);
    std::sort(t.values.begin(), t.values.end());
    t.weights.assign(t.values.size(), 1.0);
    return t;
}

/// Number of ordered (i, j) with |v_i - v_j| <= r on a sorted array.
inline std::uint64_t count_within(const std::vector<double>& v, double r) {
    // For each i, the j > i with v_j - v_i <= r; doubled, plus the diagonal.
    std::uint64_t off = 0;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (hi < i + 1) hi = i + 1;
        while (hi < v.size() && v[hi] - v[i] <= r) ++hi;
        off += hi - i - 1;
    }
    return 2 * off + v.size();
}

struct MinSumBand {
    double gap_lo = 0.0; ///< exclusive
    double gap_hi = 0.0; ///< inclusive
    std::uint64_t count = 0;
};

struct MinSumResult {
    std::int64_t X = 0;
    double c = 0.0;
    std::uint64_t pairs = 0;
    std::uint64_t near_count = 0; ///< quadruples with gap <= 1, each contributing exactly 1
    std::vector<MinSumBand> bands;
    double lower = 0.0;
    double upper = 0.0;
    double reference = 0.0; ///< X^{4-c} log^5 X
    double upper_ratio() const { return upper / reference; }
};

inline MinSumResult min_sum(std::int64_t X, double c, std::int64_t cap = default_min_sum_cap) {
    require(X >= 2, "min_sum: X must be >= 2");
    require(c >= 1.0, "min_sum: c must be >= 1");
    if (X > cap)
        throw resource_cap_error("min_sum: X = " + std::to_string(X) + " exceeds the cap " + std::to_string(cap));
    MinSumResult r;
    r.X = X;
    r.c = c;
    const auto table = integer_pair_table(X, c);
    const auto& v = table.values;
    r.pairs = v.size();
    r.near_count = count_within(v, 1.0);
    const double span = v.back() - v.front();
    std::uint64_t below = r.near_count;
    double lo_acc = static_cast<double>(r.near_count);
    double hi_acc = lo_acc;
    for (double g = 1.0; g < span; g *= 2.0) {
        const std::uint64_t within = count_within(v, 2.0 * g);
        const MinSumBand b{g, 2.0 * g, within - below};
        below = within;
        if (!b.count) continue;
        r.bands.push_back(b);
        lo_acc += static_cast<double>(b.count) / b.gap_hi;
        hi_acc += static_cast<double>(b.count) / b.gap_lo;
    }
    // Outward rounding for the accumulated floating point error.
    r.lower = lo_acc * (1.0 - 1e-12);
    r.upper = hi_acc * (1.0 + 1e-12);
    const double lx = std::log(static_cast<double>(X));
    r.reference = std::pow(static_cast<double>(X), 4.0 - c) * std::pow(lx, 5);
    return r;
}

} // namespace pdi
