#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "pdi/primes.hpp"

using namespace pdi;

namespace {

std::vector<u64> trial_primes(u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 n = lo + 1; n <= hi; ++n)
        if (is_prime_trial(n)) out.push_back(n);
    return out;
}

} // namespace

TEST(SievePrimes, SmallRanges) {
    EXPECT_EQ(sieve_primes(1, 10), (std::vector<u64>{2, 3, 5, 7}));
    EXPECT_EQ(sieve_primes(50, 100).size(), 10u);
    EXPECT_EQ(sieve_primes(50, 100), trial_primes(50, 100));
    EXPECT_TRUE(sieve_primes(10, 10).empty());
    EXPECT_TRUE(sieve_primes(0, 1).empty());
    EXPECT_EQ(sieve_primes(0, 2), (std::vector<u64>{2}));
}

TEST(SievePrimes, SegmentBoundariesMatchTrialDivision) {
    for (std::size_t seg : {64u, 97u, 1000u}) {
        EXPECT_EQ(sieve_primes(0, 20000, seg), trial_primes(0, 20000));
        EXPECT_EQ(sieve_primes(123456, 130000, seg), trial_primes(123456, 130000));
    }
}

TEST(SievePrimes, RejectsOverflow) {
    EXPECT_THROW(sieve_primes(0, (u64{1} << 62) + 1), precondition_error);
    EXPECT_THROW(sieve_primes(10, 5), precondition_error);
}

TEST(PrimeTable, SmallestPrimeFactorInvariant) {
    const PrimeTable t(100000);
    for (u64 n = 2; n <= 100000; ++n) {
        const u64 p = t.spf(n);
        ASSERT_EQ(n % p, 0u);
        for (u64 q : t.primes()) {
            if (q >= p) break;
            ASSERT_NE(n % q, 0u);
        }
    }
    for (std::size_t i = 1; i < t.primes().size(); ++i) ASSERT_LT(t.primes()[i - 1], t.primes()[i]);
}

TEST(PrimeTable, FactorizeBeyondLimit) {
    const PrimeTable t(100);
    const u64 n = 1'000'003ull * 999'983ull;
    const auto f = t.factorize(n);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0].first, 999'983u);
    EXPECT_EQ(f[1].first, 1'000'003u);
    EXPECT_EQ(t.factorize(2 * 2 * 3 * 101 * 101), (factorization{{2, 2}, {3, 1}, {101, 2}}));
    EXPECT_TRUE(t.is_prime(1'000'003));
    EXPECT_FALSE(t.is_prime(1'000'001));
}

TEST(Arithmetic, NamedValues) {
    EXPECT_EQ(euler_phi(1), 1u);
    EXPECT_EQ(moebius(1), 1);
    EXPECT_EQ(divisor_count(1), 1u);
    EXPECT_EQ(euler_phi(12), 4u);
    EXPECT_EQ(moebius(12), 0);
    EXPECT_EQ(divisor_count(12), 6u);
    EXPECT_EQ(moebius(30), -1);
    EXPECT_THROW(euler_phi(0), precondition_error);
}

TEST(Arithmetic, DivisorSumIdentitiesExhaustive) {
    const u64 limit = 100000;
    const PrimeTable t(limit);
    std::vector<u64> phi(limit + 1);
    std::vector<int> mu(limit + 1);
    std::vector<u64> tau(limit + 1);
    for (u64 n = 1; n <= limit; ++n) {
        const auto f = t.factorize(n);
        phi[n] = euler_phi(f);
        mu[n] = moebius(f);
        tau[n] = divisor_count(f);
    }
    std::vector<u64> phi_sum(limit + 1, 0), tau_count(limit + 1, 0);
    std::vector<long> mu_sum(limit + 1, 0);
    for (u64 d = 1; d <= limit; ++d)
        for (u64 m = d; m <= limit; m += d) {
            phi_sum[m] += phi[d];
            mu_sum[m] += mu[d];
            ++tau_count[m];
        }
    for (u64 n = 1; n <= limit; ++n) {
        ASSERT_EQ(phi_sum[n], n);
        ASSERT_EQ(mu_sum[n], n == 1 ? 1 : 0);
        ASSERT_EQ(tau_count[n], tau[n]);
    }
    EXPECT_EQ(phi_table(limit), phi);
}

TEST(Arithmetic, DivisorBoundEmpirical) {
    const auto tau = divisor_count_table(1'000'000);
    double worst = 0.0;
    for (u64 n = 1; n <= 1'000'000; ++n) worst = std::max(worst, tau[n] / std::pow(double(n), 0.3));
    EXPECT_LT(worst, 20.0);
}

TEST(PhiReciprocalSum, SmallValues) {
    EXPECT_DOUBLE_EQ(phi_reciprocal_sum(2), 2.0);
    EXPECT_DOUBLE_EQ(phi_reciprocal_sum(4), 3.0);
    EXPECT_THROW(phi_reciprocal_sum(1), precondition_error);
}

TEST(PhiReciprocalSum, GoldenValueAtTenThousand) {
    // Direct summation with 30-digit arithmetic and an independent totient.
    EXPECT_NEAR(phi_reciprocal_sum(10000), 17.8407990266263285768, 1e-10);
}

TEST(PhiReciprocalSum, LogRatioSlowlyVarying) {
    double prev = 0.0;
    for (u64 X : {100u, 1000u, 10000u, 100000u}) {
        const double r = phi_reciprocal_sum(X) / std::log(double(X));
        if (prev > 0.0) {
            EXPECT_GE(r / prev, 0.8);
            EXPECT_LE(r / prev, 1.3);
        }
        prev = r;
    }
}

TEST(ClassifyShifted, NamedExamples) {
    auto v = classify_shifted(5, 3);
    EXPECT_EQ(v.n, 7u);
    EXPECT_EQ(v.omega, 1);
    EXPECT_TRUE(v.is_coprime_to_Pz);

    v = classify_shifted(13, 3);
    EXPECT_EQ(v.n, 15u);
    EXPECT_FALSE(v.is_coprime_to_Pz);
    EXPECT_EQ(*v.least_odd_prime_factor, 3u);

    v = classify_shifted(7, 3);
    EXPECT_EQ(v.omega, 2);
    EXPECT_EQ(v.omega_distinct, 1);
    EXPECT_FALSE(v.is_coprime_to_Pz);

    v = classify_shifted(2, 3); // 4 = 2^2 has no odd prime factor
    EXPECT_FALSE(v.least_odd_prime_factor.has_value());
    EXPECT_TRUE(v.is_coprime_to_Pz);

    EXPECT_THROW(classify_shifted(9, 3), precondition_error);
    EXPECT_THROW(classify_shifted(5, 2.5), precondition_error);
}

TEST(ClassifyShifted, CoprimalityMatchesLeastOddFactor) {
    const PrimeTable t(50000);
    for (u64 p : sieve_primes(2, 40000)) {
        for (double z : {3.0, 5.0, 10.0, 31.0}) {
            const auto a = classify_shifted(p, z, &t);
            const auto b = classify_shifted(p, z);
            ASSERT_EQ(a.omega, b.omega);
            const bool expect = !a.least_odd_prime_factor || double(*a.least_odd_prime_factor) > z;
            ASSERT_EQ(a.is_coprime_to_Pz, expect);
            bool direct = true;
            for (u64 q = 3; double(q) <= z; q += 2)
                if (is_prime_trial(q) && (p + 2) % q == 0) direct = false;
            ASSERT_EQ(a.is_coprime_to_Pz, direct);
        }
    }
}
