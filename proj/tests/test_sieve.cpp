#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "pdi/sieve.hpp"

using namespace pdi;

TEST(Rosser, UnitEntryAndStructure) {
    for (auto [D, z] : {std::pair{50.0, 10.0}, {100.0, 10.0}, {500.0, 20.0}, {1000.0, 30.0}, {1e5, 60.0}}) {
        for (auto sign : {SieveSign::plus, SieveSign::minus}) {
            const auto w = build_rosser(D, z, sign);
            EXPECT_EQ(w.lambda(1), 1);
            for (const auto& e : w.entries()) {
                ASSERT_LT(double(e.d), D);
                ASSERT_EQ(e.d % 2, 1u);
                const auto f = factorize_trial(e.d);
                ASSERT_NE(moebius(f), 0);
                ASSERT_EQ(e.lambda, moebius(f));
                for (auto [p, k] : f) ASSERT_LE(double(p), z);
            }
        }
    }
}

TEST(Rosser, SinglePrimeConditions) {
    // plus: lambda(p) = -1 iff p^3 < D.
    const auto plus = build_rosser(100.0, 7.0, SieveSign::plus);
    EXPECT_EQ(plus.lambda(3), -1); // 27 < 100
    EXPECT_EQ(plus.lambda(5), 0);  // 125 >= 100
    EXPECT_EQ(plus.lambda(7), 0);
    // minus: no even index to check for a single prime.
    const auto minus = build_rosser(100.0, 7.0, SieveSign::minus);
    EXPECT_EQ(minus.lambda(3), -1);
    EXPECT_EQ(minus.lambda(5), -1);
    EXPECT_EQ(minus.lambda(7), -1);
}

TEST(Rosser, MatchesBruteForceDefinition) {
    for (auto [D, z] : {std::pair{50.0, 10.0}, {1000.0, 30.0}, {3000.0, 40.0}}) {
        for (auto sign : {SieveSign::plus, SieveSign::minus}) {
            const auto w = build_rosser(D, z, sign);
            for (u64 d = 1; double(d) < D; d += 2) {
                const auto f = factorize_trial(d);
                int expect = moebius(f);
                bool smooth = true;
                for (auto [p, e] : f) smooth = smooth && double(p) <= z;
                if (!smooth) expect = 0;
                if (expect != 0) {
                    std::vector<u64> ps;
                    for (auto it = f.rbegin(); it != f.rend(); ++it) ps.push_back(it->first);
                    double prefix = 1.0;
                    for (std::size_t m = 1; m <= ps.size(); ++m) {
                        const bool odd = m % 2 == 1;
                        if ((sign == SieveSign::plus) == odd && prefix * std::pow(double(ps[m - 1]), 3) >= D) expect = 0;
                        prefix *= double(ps[m - 1]);
                    }
                }
                ASSERT_EQ(w.lambda(d), expect) << "d=" << d;
            }
        }
    }
}

TEST(Rosser, Preconditions) {
    EXPECT_THROW(build_rosser(2.0, 5.0, SieveSign::minus), precondition_error);
    EXPECT_THROW(build_rosser(100.0, 2.0, SieveSign::plus), precondition_error);
    EXPECT_THROW(build_rosser(5.0, 7.0, SieveSign::minus), precondition_error);
    EXPECT_THROW(build_rosser(1e9, 2000.0, SieveSign::plus, 100), resource_cap_error);
}

TEST(LambdaSum, NamedCases) {
    const auto plus = build_rosser(100.0, 5.0, SieveSign::plus);
    const auto minus = build_rosser(100.0, 5.0, SieveSign::minus);
    EXPECT_EQ(lambda_sum_at(plus, 7 * 11), 1);
    EXPECT_EQ(lambda_sum_at(minus, 1), 1);
    EXPECT_EQ(lambda_sum_at(plus, 1024), 1);
    EXPECT_EQ(lambda_sum_at(minus, 1024), 1);
    // m = 15: divisors {1, 3, 5, 15}.
    // plus: lambda(3) = -1 (27 < 100), lambda(5) = 0 (125), lambda(15): p1 = 5 fails at m = 1.
    EXPECT_EQ(lambda_sum_at(plus, 15), 1 - 1);
    // minus: lambda(3) = lambda(5) = -1, lambda(15) = 0 since 5 * 3^3 = 135 >= 100.
    EXPECT_EQ(lambda_sum_at(minus, 15), 1 - 1 - 1);
}

TEST(Sandwich, TestMatrixExhaustive) {
    for (auto [D, z] : {std::pair{50.0, 10.0}, {100.0, 10.0}, {500.0, 20.0}, {1000.0, 30.0}})
        EXPECT_EQ(sandwich_check(D, z, 100000), 0u) << D << " " << z;
    EXPECT_EQ(sandwich_check(100.0, 10.0, 1), 0u);
}

TEST(VectorSieve, NamedArithmetic) {
    EXPECT_EQ(vector_sieve_bound({1, 1, 1, 1}, {1, 1, 1, 1}), 1.0);
    EXPECT_EQ(vector_sieve_bound({1, 1, 1, -1}, {1, 1, 1, 2}), 2 + 2 + 2 - 1 - 6);
    EXPECT_LE(vector_sieve_bound({1, 1, 1, -1}, {1, 1, 1, 2}), 0.0);
    // hi_i = 0 with lo_i <= 0.
    EXPECT_LE(vector_sieve_bound({0, 1, -1, 1}, {0, 2, 1, 1}), 0.0);
    EXPECT_LE(vector_sieve_bound({-2, 1, 1, 1}, {0, 1, 1, 1}), 0.0);
}

TEST(VectorSieve, HoldsOnRandomSieveQuadruples) {
    const auto plus = build_rosser(1000.0, 30.0, SieveSign::plus);
    const auto minus = build_rosser(1000.0, 30.0, SieveSign::minus);
    std::vector<std::array<double, 3>> vals(2001);
    for (u64 m = 1; m <= 2000; ++m) {
        const auto sifted = sifted_part(factorize_trial(m), 30.0);
        vals[m] = {double(lambda_sum(minus, sifted)), sifted.empty() ? 1.0 : 0.0, double(lambda_sum(plus, sifted))};
    }
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<u64> pick(1, 2000);
    for (int i = 0; i < 100000; ++i) {
        std::array<double, 4> lo, hi;
        double prod = 1.0;
        for (int j = 0; j < 4; ++j) {
            const auto& v = vals[pick(rng)];
            lo[j] = v[0];
            prod *= v[1];
            hi[j] = v[2];
        }
        ASSERT_LE(vector_sieve_bound(lo, hi), prod);
    }
}

TEST(GSum, NamedTables) {
    EXPECT_EQ(g_sum(RosserWeights::unit()), 1.0);
    const auto minus = build_rosser(100.0, 5.0, SieveSign::minus);
    EXPECT_EQ(minus.size(), 3u);
    EXPECT_DOUBLE_EQ(g_sum(minus), 1.0 - 0.5 - 0.25);
}

TEST(GSum, ExactAndFloatPathsAgree) {
    for (auto [D, z] : {std::pair{1e4, 50.0}, {1e5, 100.0}, {1e6, 200.0}}) {
        for (auto sign : {SieveSign::plus, SieveSign::minus}) {
            const auto w = build_rosser(D, z, sign);
            const double exact = static_cast<double>(g_sum_exact(w));
            EXPECT_NEAR(g_sum_float(w), exact, 1e-13 * std::max(1.0, std::fabs(exact)));
        }
    }
}

TEST(GSum, PlusDominatesMinusTermwise) {
    for (auto [D, z] : {std::pair{100.0, 10.0}, {1000.0, 30.0}, {1e4, 60.0}}) {
        EXPECT_GE(g_sum(build_rosser(D, z, SieveSign::plus)), g_sum(build_rosser(D, z, SieveSign::minus)));
    }
}

TEST(CurlyF, Values) {
    EXPECT_EQ(curly_F(3).value, 0.5);
    EXPECT_FALSE(curly_F(3).empty_product);
    EXPECT_EQ(curly_F(5).value, 0.375);
    EXPECT_EQ(curly_F(2.5).value, 1.0);
    EXPECT_TRUE(curly_F(2.5).empty_product);
    // 30-digit product over the odd primes up to 100.
    EXPECT_NEAR(curly_F(100).value, 0.159150197589858841887, 1e-12);
}

TEST(SieveFunctions, ClosedForms) {
    auto v = sieve_functions(2.0);
    EXPECT_EQ(v.f, 0.0);
    EXPECT_NEAR(v.F, 1.78107241799019798524, 1e-14);
    v = sieve_functions(3.0);
    EXPECT_NEAR(v.f, 0.823030216601993431530, 1e-14);
    EXPECT_NEAR(v.F, 1.18738161199346532349, 1e-14);
    v = sieve_functions(2.95);
    EXPECT_NEAR(v.f - 2.0 / 3.0 * v.F, 0.00140397520320956945, 1e-14);
    EXPECT_THROW(sieve_functions(1.99), precondition_error);
    EXPECT_THROW(sieve_functions(3.01), precondition_error);
    double pf = -1.0, pF = 1e9;
    for (int i = 0; i <= 1000; ++i) {
        v = sieve_functions(2.0 + i / 1000.0);
        EXPECT_LE(v.f, v.F);
        if (i > 0) {
            EXPECT_GT(v.f, pf);
            EXPECT_LT(v.F, pF);
        }
        pf = v.f;
        pF = v.F;
    }
}

TEST(GBounds, ChainHolds) {
    auto r = g_bounds_check(343.0, 7.0);
    EXPECT_TRUE(r.chain_holds);
    r = g_bounds_check(27.0, 3.0);
    EXPECT_TRUE(r.chain_holds);
    EXPECT_EQ(r.G_plus, 1.0);  // 3^3 = 27 is not < 27
    EXPECT_EQ(r.G_minus, 0.5);
    EXPECT_EQ(r.curly_F, 0.5);
    for (auto [D, z] : {std::pair{1e4, 50.0}, {1e6, 100.0}, {1e6, 1000.0}, {8000.0, 20.0}})
        EXPECT_TRUE(g_bounds_check(D, z).chain_holds) << D << " " << z;
    EXPECT_THROW(g_bounds_check(100.0, 50.0), precondition_error);
}

TEST(GBounds, IdenticalTablesGiveEqualSums) {
    // z = 4 with D = 30: both signs keep {1, 3}.
    const auto r = g_bounds_check(30.0, 4.0);
    EXPECT_EQ(r.G_minus, r.G_plus);
}
