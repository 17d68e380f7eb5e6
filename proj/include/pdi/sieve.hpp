#pragma once

/// @file sieve.hpp
/// @brief Rosser weights of level D, the sieve sandwich, the four-factor
/// vector sieve inequality, the sums G^{+-}, the product F(z) and the
/// closed-form linear sieve functions on 2 <= s <= 3.
///
/// Weights are built by the Iwaniec truncation: for d = p_1 > p_2 > ... > p_r,
/// lambda(d) = mu(d) when p_1 ... p_{m-1} p_m^3 < D holds at every index m of
/// the sign's parity (odd m for the upper sieve, even m for the lower) and
/// d < D; otherwise lambda(d) = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pdi/error.hpp"
#include "pdi/numeric.hpp"
#include "pdi/primes.hpp"

namespace pdi {

enum class SieveSign { plus, minus };

inline const char* to_string(SieveSign s) { return s == SieveSign::plus ? "plus" : "minus"; }

/// Default upper limit on the number of nonzero weights.
inline constexpr std::size_t default_weight_cap = 10'000'000;

/// Odd primes in (2, z].
inline std::vector<u64> odd_primes_upto(double z) {
    if (z < 3.0) return {};
    auto ps = sieve_primes(2, static_cast<u64>(std::floor(z)));
    return ps;
}

struct WeightEntry {
    u64 d = 1;
    int lambda = 1;
    std::vector<u64> primes; ///< prime factors of d, descending
};

/// Level-D Rosser weights for one sign. Only nonzero entries are stored,
/// sorted by d; lookups of absent d return 0.
class RosserWeights {
public:
    RosserWeights() = default;

    /// The single-entry table {1 -> 1}; every sieve sum collapses to 1.
    static RosserWeights unit(SieveSign sign = SieveSign::plus, double D = 2.0, double z = 2.0) {
        RosserWeights w;
        w.level_D_ = D;
        w.z_ = z;
        w.sign_ = sign;
        w.entries_.push_back(WeightEntry{1, 1, {}});
        return w;
    }

    static RosserWeights build(double D, double z, SieveSign sign,
                               std::size_t cap = default_weight_cap) {
        require(z >= 3.0, "build_rosser: z must be >= 3");
        require(D >= 3.0, "build_rosser: level D must be >= 3 for a meaningful lower sieve");
        RosserWeights w;
        w.level_D_ = D;
        w.z_ = z;
        w.sign_ = sign;
        w.primes_ = odd_primes_upto(z);
        require(w.primes_.empty() || static_cast<double>(w.primes_.back()) < D,
                "build_rosser: sifting primes up to z must lie below the level D");

        const long double level = D;
        std::vector<u64> stack;
        w.entries_.push_back(WeightEntry{1, 1, {}});
        // Depth-first over p_1 > p_2 > ...; `limit` is the index bound for the
        // next prime, `prefix` the product of the primes chosen so far.
        auto dfs = [&](auto&& self, std::size_t limit, long double prefix, int depth) -> void {
            const int m = depth + 1;
            const bool checked = (sign == SieveSign::plus) ? (m % 2 == 1) : (m % 2 == 0);
            for (std::size_t i = 0; i < limit; ++i) {
                const long double p = static_cast<long double>(w.primes_[i]);
                if (prefix * p >= level) break;
                if (checked && prefix * p * p * p >= level) break;
                stack.push_back(w.primes_[i]);
                const u64 d = static_cast<u64>(prefix * p + 0.5L);
                w.entries_.push_back(WeightEntry{d, (m % 2) ? -1 : 1, stack});
                if (w.entries_.size() > cap)
                    throw resource_cap_error("build_rosser: weight table exceeds cap of " +
                                             std::to_string(cap) + " entries");
                self(self, i, prefix * p, depth + 1);
                stack.pop_back();
            }
        };
        dfs(dfs, w.primes_.size(), 1.0L, 0);
        std::sort(w.entries_.begin(), w.entries_.end(),
                  [](const WeightEntry& a, const WeightEntry& b) { return a.d < b.d; });
        return w;
    }

    double level_D() const noexcept { return level_D_; }
    double z() const noexcept { return z_; }
    SieveSign sign() const noexcept { return sign_; }
    const std::vector<WeightEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Odd primes in (2, z] used as the sifting set.
    const std::vector<u64>& sifting_primes() const noexcept { return primes_; }

    int lambda(u64 d) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), d,
                                   [](const WeightEntry& e, u64 v) { return e.d < v; });
        return (it != entries_.end() && it->d == d) ? it->lambda : 0;
    }

private:
    double level_D_ = 0.0;
    double z_ = 0.0;
    SieveSign sign_ = SieveSign::plus;
    std::vector<u64> primes_;
    std::vector<WeightEntry> entries_;
};

inline RosserWeights build_rosser(double D, double z, SieveSign sign,
                                  std::size_t cap = default_weight_cap) {
    return RosserWeights::build(D, z, sign, cap);
}

/// Distinct odd primes <= z dividing m, given m's factorization.
inline std::vector<u64> sifted_part(const factorization& f, double z) {
    std::vector<u64> out;
    for (auto [p, e] : f)
        if (p != 2 && static_cast<double>(p) <= z) out.push_back(p);
    return out;
}

/// Lambda(m) = sum over d | (m, P(z)) of lambda(d).
inline long lambda_sum(const RosserWeights& w, const std::vector<u64>& sifted) {
    long acc = 0;
    const std::size_t k = sifted.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        u64 d = 1;
        for (std::size_t j = 0; j < k; ++j)
            if (mask >> j & 1) d *= sifted[j];
        acc += w.lambda(d);
    }
    return acc;
}

inline long lambda_sum_at(const RosserWeights& w, u64 m) {
    require(m >= 1, "lambda_sum_at: m must be >= 1");
    return lambda_sum(w, sifted_part(factorize_trial(m), w.z()));
}

/// Counts m <= M violating Lambda^-(m) <= [(m, P(z)) = 1] <= Lambda^+(m).
inline u64 sandwich_check(double D, double z, u64 M) {
    require(M >= 1, "sandwich_check: M must be >= 1");
    const auto plus = build_rosser(D, z, SieveSign::plus);
    const auto minus = build_rosser(D, z, SieveSign::minus);
    const PrimeTable table(std::max<u64>(M, 2));
    u64 violations = 0;
    for (u64 m = 1; m <= M; ++m) {
        const auto sifted = sifted_part(table.factorize(m), z);
        const long indicator = sifted.empty() ? 1 : 0;
        if (lambda_sum(minus, sifted) > indicator || lambda_sum(plus, sifted) < indicator) ++violations;
    }
    return violations;
}

/// lo1 hi2 hi3 hi4 + hi1 lo2 hi3 hi4 + hi1 hi2 lo3 hi4 + hi1 hi2 hi3 lo4 - 3 hi1 hi2 hi3 hi4.
inline double vector_sieve_bound(const std::array<double, 4>& lo, const std::array<double, 4>& hi) {
    double total = -3.0 * hi[0] * hi[1] * hi[2] * hi[3];
    for (int i = 0; i < 4; ++i) {
        double term = 1.0;
        for (int j = 0; j < 4; ++j) term *= (i == j) ? lo[j] : hi[j];
        total += term;
    }
    return total;
}

// ---------------------------------------------------------------------------
// G = sum lambda(d) / phi(d)

using rational = boost::multiprecision::cpp_rational;

inline u64 phi_of_squarefree(const std::vector<u64>& primes) {
    u64 r = 1;
    for (u64 p : primes) r *= p - 1;
    return r;
}

inline rational g_sum_exact(const RosserWeights& w) {
    rational acc = 0;
    for (const auto& e : w.entries())
        acc += rational(e.lambda, static_cast<long long>(phi_of_squarefree(e.primes)));
    return acc;
}

inline double g_sum_float(const RosserWeights& w) {
    compensated_sum<double> acc;
    for (const auto& e : w.entries())
        acc += e.lambda / static_cast<double>(phi_of_squarefree(e.primes));
    return acc.value();
}

/// Exact rational arithmetic up to `exact_limit` entries, compensated
/// floating point above.
inline double g_sum(const RosserWeights& w, std::size_t exact_limit = 10'000) {
    if (w.size() <= exact_limit) return static_cast<double>(g_sum_exact(w));
    return g_sum_float(w);
}

/// F(z) = prod over 2 < p <= z of (1 - 1/(p - 1)).
struct CurlyF {
    double value = 1.0;
    bool empty_product = true; ///< z < 3, no factors
};

inline CurlyF curly_F(double z) {
    CurlyF out;
    for (u64 p : odd_primes_upto(z)) {
        out.value *= 1.0 - 1.0 / static_cast<double>(p - 1);
        out.empty_product = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Linear sieve functions on [2, 3]

struct SieveFunctionValue {
    double s = 0.0;
    double f = 0.0; ///< lower
    double F = 0.0; ///< upper
};

inline SieveFunctionValue sieve_functions(double s) {
    require(s >= 2.0 && s <= 3.0, "sieve_functions: closed forms hold only for 2 <= s <= 3");
    const double scale = 2.0 * std::exp(std::numbers::egamma) / s;
    return {s, scale * std::log(s - 1.0), scale};
}

struct GBoundsReport {
    double D = 0.0;
    double z = 0.0;
    double s = 0.0;
    double G_minus = 0.0;
    double curly_F = 0.0;
    double G_plus = 0.0;
    double f = 0.0;
    double F = 0.0;
    double ratio_lower = 0.0; ///< G^- / (F(z) f(s)); infinite when f(s) = 0
    double ratio_upper = 0.0; ///< G^+ / (F(z) F(s))
    bool chain_holds = false; ///< G^- <= F(z) <= G^+
};

inline GBoundsReport g_bounds_check(double D, double z) {
    double s = std::log(D) / std::log(z);
    if (std::fabs(s - 2.0) < 1e-12) s = 2.0;
    if (std::fabs(s - 3.0) < 1e-12) s = 3.0;
    require(s >= 2.0 && s <= 3.0, "g_bounds_check: s = log D / log z must lie in [2, 3]");
    GBoundsReport r;
    r.D = D;
    r.z = z;
    r.s = s;
    const auto plus = build_rosser(D, z, SieveSign::plus);
    const auto minus = build_rosser(D, z, SieveSign::minus);
    const auto sf = sieve_functions(s);
    r.curly_F = curly_F(z).value;
    r.f = sf.f;
    r.F = sf.F;
    if (plus.size() <= 10'000 && minus.size() <= 10'000) {
        const rational gp = g_sum_exact(plus);
        const rational gm = g_sum_exact(minus);
        // F(z) is a finite product of rationals; compare exactly.
        rational cf = 1;
        for (u64 p : plus.sifting_primes()) cf *= rational(static_cast<long long>(p - 2), static_cast<long long>(p - 1));
        r.chain_holds = gm <= cf && cf <= gp;
        r.G_plus = static_cast<double>(gp);
        r.G_minus = static_cast<double>(gm);
    } else {
        r.G_plus = g_sum_float(plus);
        r.G_minus = g_sum_float(minus);
        r.chain_holds = r.G_minus <= r.curly_F && r.curly_F <= r.G_plus;
    }
    r.ratio_lower = r.G_minus / (r.curly_F * r.f);
    r.ratio_upper = r.G_plus / (r.curly_F * r.F);
    return r;
}

} // namespace pdi
