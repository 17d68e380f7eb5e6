#pragma once

/// @file primes.hpp
/// @brief Prime enumeration, multiplicative functions and the roughness
/// classification of shifted primes p + 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdi/error.hpp"
#include "pdi/numeric.hpp"

namespace pdi {

using u64 = std::uint64_t;

/// (prime, exponent) pairs in increasing prime order.
using factorization = std::vector<std::pair<u64, int>>;

inline constexpr u64 max_sieve_bound = u64{1} << 62;

/// Default segment length in bytes, roughly one L2 cache.
inline constexpr std::size_t default_segment_bytes = std::size_t{1} << 18;

/// Integer square root, floor(sqrt(n)).
inline u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Trial division factorization, 2 first and then odd candidates.
inline factorization factorize_trial(u64 n) {
    require(n >= 1, "factorize: n must be >= 1");
    factorization out;
    auto strip = [&](u64 p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    };
    strip(2);
    for (u64 p = 3; p <= n / p; p += 2) strip(p);
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

/// Deterministic primality by trial division up to sqrt(n).
inline bool is_prime_trial(u64 n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (u64 d = 3; d <= n / d; d += 2)
        if (n % d == 0) return false;
    return true;
}

/// Primes <= limit plus the smallest-prime-factor map on [0, limit].
class PrimeTable {
public:
    explicit PrimeTable(u64 limit) : limit_(limit) {
        require(limit <= (u64{1} << 32), "PrimeTable: limit above 2^32");
        spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
        // Linear sieve: every composite is crossed exactly once by its spf.
        for (u64 i = 2; i <= limit; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = static_cast<std::uint32_t>(i);
                primes_.push_back(i);
            }
            for (u64 p : primes_) {
                if (p > spf_[i] || i * p > limit) break;
                spf_[i * p] = static_cast<std::uint32_t>(p);
            }
        }
    }

    u64 limit() const noexcept { return limit_; }
    const std::vector<u64>& primes() const noexcept { return primes_; }

    /// Smallest prime factor of n, 2 <= n <= limit.
    u64 spf(u64 n) const {
        require(n >= 2 && n <= limit_, "PrimeTable::spf: n outside [2, limit]");
        return spf_[n];
    }

    bool is_prime(u64 n) const {
        if (n <= limit_) return n >= 2 && spf_[n] == n;
        for (u64 p : primes_) {
            if (p > n / p) return true;
            if (n % p == 0) return false;
        }
        return is_prime_trial(n);
    }

    /// Factorization by spf lookup inside the table, trial division by
    /// table primes and then odd candidates beyond it.
    factorization factorize(u64 n) const {
        require(n >= 1, "factorize: n must be >= 1");
        factorization out;
        if (n <= limit_) {
            while (n > 1) {
                const u64 p = spf_[n];
                int e = 0;
                while (n % p == 0) {
                    n /= p;
                    ++e;
                }
                out.emplace_back(p, e);
            }
            return out;
        }
        u64 last = 1;
        for (u64 p : primes_) {
            if (p > n / p) break;
            last = p;
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            if (e) out.emplace_back(p, e);
        }
        if (n > 1 && n <= limit_) {
            for (auto& f : factorize(n)) out.push_back(f);
            return out;
        }
        for (u64 p = last < 3 ? 3 : last + 2; p <= n / p; p += 2) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            if (e) out.emplace_back(p, e);
        }
        if (n > 1) out.emplace_back(n, 1);
        return out;
    }

private:
    u64 limit_;
    std::vector<u64> primes_;
    std::vector<std::uint32_t> spf_;
};

/// Primes in (lo, hi], ascending, by a segmented sieve of Eratosthenes.
inline std::vector<u64> sieve_primes(u64 lo, u64 hi, std::size_t segment_bytes = default_segment_bytes) {
    require(hi <= max_sieve_bound, "sieve_primes: hi exceeds 2^62");
    require(lo <= hi, "sieve_primes: lo > hi");
    require(segment_bytes >= 64, "sieve_primes: segment too small");
    std::vector<u64> out;
    if (hi < 2 || lo == hi) return out;

    const u64 root = isqrt(hi);
    std::vector<u64> base;
    {
        std::vector<char> small(static_cast<std::size_t>(root) + 1, 1);
        for (u64 i = 2; i <= root; ++i) {
            if (!small[i]) continue;
            base.push_back(i);
            for (u64 j = i * i; j <= root; j += i) small[j] = 0;
        }
    }

    std::vector<char> seg(segment_bytes);
    for (u64 start = std::max<u64>(lo + 1, 2); start <= hi;) {
        const u64 len = std::min<u64>(segment_bytes, hi - start + 1);
        std::fill_n(seg.begin(), len, char{1});
        for (u64 p : base) {
            if (p * p > start + len - 1) break;
            u64 first = std::max(p * p, (start + p - 1) / p * p);
            for (u64 j = first; j < start + len; j += p) seg[j - start] = 0;
        }
        for (u64 i = 0; i < len; ++i)
            if (seg[i]) out.push_back(start + i);
        if (hi - start < len) break;
        start += len;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Multiplicative functions

inline u64 euler_phi(const factorization& f) {
    u64 r = 1;
    for (auto [p, e] : f) {
        r *= p - 1;
        for (int i = 1; i < e; ++i) r *= p;
    }
    return r;
}

inline int moebius(const factorization& f) {
    for (auto [p, e] : f)
        if (e > 1) return 0;
    return f.size() % 2 ? -1 : 1;
}

inline u64 divisor_count(const factorization& f) {
    u64 r = 1;
    for (auto [p, e] : f) r *= static_cast<u64>(e + 1);
    return r;
}

inline u64 euler_phi(u64 n) { return euler_phi(factorize_trial(n)); }
inline int moebius(u64 n) { return moebius(factorize_trial(n)); }
inline u64 divisor_count(u64 n) { return divisor_count(factorize_trial(n)); }

/// phi(n) for 0 <= n <= limit (phi(0) stored as 0).
inline std::vector<u64> phi_table(u64 limit) {
    std::vector<u64> phi(static_cast<std::size_t>(limit) + 1);
    for (u64 i = 0; i <= limit; ++i) phi[i] = i;
    for (u64 p = 2; p <= limit; ++p) {
        if (phi[p] != p) continue;
        for (u64 m = p; m <= limit; m += p) phi[m] -= phi[m] / p;
    }
    return phi;
}

/// tau(n) for 0 <= n <= limit.
inline std::vector<std::uint32_t> divisor_count_table(u64 limit) {
    std::vector<std::uint32_t> tau(static_cast<std::size_t>(limit) + 1, 0);
    for (u64 d = 1; d <= limit; ++d)
        for (u64 m = d; m <= limit; m += d) ++tau[m];
    return tau;
}

/// Sum_{n <= X} 1/phi(n), summed in increasing n.
inline double phi_reciprocal_sum(u64 X) {
    require(X >= 2, "phi_reciprocal_sum: X must be >= 2");
    const auto phi = phi_table(X);
    compensated_sum<double> acc;
    for (u64 n = 1; n <= X; ++n) acc += 1.0 / static_cast<double>(phi[n]);
    return acc.value();
}

// ---------------------------------------------------------------------------
// Roughness of p + 2

struct RoughnessVerdict {
    u64 n = 0;
    std::optional<u64> least_odd_prime_factor;
    int omega = 0;          ///< prime factors with multiplicity
    int omega_distinct = 0; ///< distinct prime factors
    bool is_coprime_to_Pz = false;
};

/// Classifies n against P(z) = prod of odd primes <= z.
inline RoughnessVerdict classify(u64 n, const factorization& f, double z) {
    RoughnessVerdict v;
    v.n = n;
    for (auto [p, e] : f) {
        v.omega += e;
        ++v.omega_distinct;
        if (p != 2 && !v.least_odd_prime_factor) v.least_odd_prime_factor = p;
    }
    v.is_coprime_to_Pz =
        !v.least_odd_prime_factor || static_cast<double>(*v.least_odd_prime_factor) > z;
    return v;
}

/// Factorizes p + 2 completely and classifies it against P(z).
inline RoughnessVerdict classify_shifted(u64 p, double z, const PrimeTable* table = nullptr) {
    require(z >= 3.0, "classify_shifted: z must be >= 3");
    require(p <= std::numeric_limits<u64>::max() - 2, "classify_shifted: p + 2 overflows");
    const bool prime = table ? table->is_prime(p) : is_prime_trial(p);
    require(prime, "classify_shifted: " + std::to_string(p) + " is not prime");
    const u64 n = p + 2;
    return classify(n, table ? table->factorize(n) : factorize_trial(n), z);
}

} // namespace pdi
