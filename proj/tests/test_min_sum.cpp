#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pdi/min_sum.hpp"

using namespace pdi;

TEST(MinSum, TinyCaseByHand) {
    // n in {3, 4}: 16 quadruples.
    const auto r = min_sum(4, 1.5);
    EXPECT_EQ(r.pairs, 4u);
    EXPECT_EQ(r.near_count, oracle::min_sum_near_brute(4, 1.5));
    const double exact = oracle::min_sum_brute(4, 1.5);
    EXPECT_LE(r.lower, exact);
    EXPECT_GE(r.upper, exact);
}

TEST(MinSum, IntervalContainsBruteForceUpTo24) {
    for (double c : {1.0, 1.1, 1.5}) {
        for (std::int64_t X = 2; X <= 24; ++X) {
            const auto r = min_sum(X, c);
            const double exact = oracle::min_sum_brute(X, c);
            EXPECT_LE(r.lower, exact) << X << " " << c;
            EXPECT_GE(r.upper, exact) << X << " " << c;
            EXPECT_LE(r.upper, 2.0 * r.lower * (1 + 1e-11));
            EXPECT_EQ(r.near_count, oracle::min_sum_near_brute(X, c));
        }
    }
}

TEST(MinSum, DiagonalLowerBound) {
    for (std::int64_t X : {50, 101, 200}) {
        const auto r = min_sum(X, 1.1);
        const double half = double(X - X / 2);
        EXPECT_GE(double(r.near_count), half * half);
        EXPECT_GE(r.lower, half * half * (1 - 1e-12));
    }
}

TEST(MinSum, BandsPartitionAllQuadruples) {
    const auto r = min_sum(64, 1.2);
    std::uint64_t total = r.near_count;
    for (const auto& b : r.bands) total += b.count;
    EXPECT_EQ(total, r.pairs * r.pairs);
}

TEST(MinSum, CapAndPreconditions) {
    EXPECT_THROW(min_sum(5000, 1.1), resource_cap_error);
    EXPECT_THROW(min_sum(100, 1.1, 50), resource_cap_error);
    EXPECT_THROW(min_sum(1, 1.1), precondition_error);
    EXPECT_THROW(min_sum(10, 0.9), precondition_error);
}

TEST(PairTable, SortedAndComplete) {
    const auto t = integer_pair_table(30, 1.3);
    EXPECT_EQ(t.values.size(), 15u * 15u);
    EXPECT_TRUE(std::is_sorted(t.values.begin(), t.values.end()));
    EXPECT_EQ(t.weights.size(), t.values.size());
}
