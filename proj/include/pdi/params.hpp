#pragma once

/// @file params.hpp
/// @brief Derived theorem parameters X, tau, vartheta, K, D, eta, z, beta, h
/// and the sieve-quality scan.

#include <cmath>
#include <string>
#include <vector>

#include "pdi/error.hpp"
#include "pdi/sieve.hpp"

namespace pdi {

inline constexpr double eps0 = 0.001;
inline constexpr double default_A = 21.0;
inline constexpr double default_s = 2.95;

/// Upper end of the main range 1 < c < 832/825 and the variant 1 < c < 51/50.
inline constexpr double main_range_end = 832.0 / 825.0;
inline constexpr double variant_range_end = 51.0 / 50.0;

/// A rational exponent p/q kept next to its decimal value for reports.
struct RationalExponent {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// tau exponent is 57/275 - c; D exponent is 1/11 - 1/1000 = 989/11000.
inline constexpr RationalExponent tau_exponent_base{57, 275};
inline constexpr RationalExponent D_exponent{989, 11000};

struct TheoremParams {
    double c = 0.0;
    double N = 0.0;
    double A = default_A;
    double X = 0.0;
    double tau = 0.0;
    double vartheta = 0.0;
    double K = 0.0;
    double D = 0.0;
    double eta = eps0 / 9.0;
    double s = default_s;
    double beta = 0.0;
    double z = 0.0;
    long h = 0;

    /// beta >= 1/33 contradicts the stated range 0 < beta < 1/33.
    bool beta_exceeds_one_33rd() const { return beta >= 1.0 / 33.0; }
    double log_X() const { return std::log(X); }
};

enum class RangeClass { inside_main_range, inside_variant_range_only, outside };

inline const char* to_string(RangeClass r) {
    switch (r) {
    case RangeClass::inside_main_range: return "inside-main-range";
    case RangeClass::inside_variant_range_only: return "inside-variant-range-only";
    case RangeClass::outside: return "outside";
    }
    return "?";
}

inline RangeClass check_theorem_range(double c) {
    if (c > 1.0 && c < main_range_end) return RangeClass::inside_main_range;
    if (c > 1.0 && c < variant_range_end) return RangeClass::inside_variant_range_only;
    return RangeClass::outside;
}

inline double beta_for(double s) { return D_exponent.value() / s; }

/// All derived quantities from (c, N, A, s). c = 1 is accepted as the
/// degenerate integer case; c < 1 is rejected.
inline TheoremParams derive_params(double c, double N, double A = default_A, double s = default_s) {
    require(c >= 1.0, "derive_params: c must be >= 1");
    require(A > 0.0, "derive_params: A must be positive");
    require(s >= 2.0 && s <= 3.0, "derive_params: s must lie in [2, 3]");
    require(N > 0.0 && std::isfinite(N), "derive_params: N must be positive and finite");
    TheoremParams p;
    p.c = c;
    p.N = N;
    p.A = A;
    p.s = s;
    p.X = std::pow(N / 3.0, 1.0 / c);
    require(p.X >= 16.0, "derive_params: N too small, X = (N/3)^(1/c) must be >= 16");
    const double L = std::log(p.X);
    p.tau = std::pow(p.X, tau_exponent_base.value() - c);
    p.vartheta = std::pow(L, -(A + 1.0));
    p.K = L * L / p.vartheta;
    p.D = std::pow(p.X, D_exponent.value());
    p.eta = eps0 / 9.0;
    p.beta = beta_for(s);
    p.z = std::pow(p.X, p.beta);
    p.h = static_cast<long>(std::floor(1.0 / p.beta));
    return p;
}

struct ScanPoint {
    double s = 0.0;
    double objective = 0.0;
};

struct SieveQualityScan {
    double coefficient = 0.0;
    std::vector<ScanPoint> points;
    double best_s = 0.0;
    double best_objective = 0.0;
    double best_beta = 0.0;
    long best_h = 0;
    bool all_negative = false;
};

/// objective(s) = f(s) - coefficient * F(s) on s = 2, 2 + step, ..., 3.
/// `D_exponent_value` is the exponent of X in the level D.
inline SieveQualityScan scan_sieve_quality(double coefficient, double grid_step,
                                           double D_exponent_value = D_exponent.value()) {
    require(grid_step > 0.0 && grid_step <= 1.0, "scan_sieve_quality: grid_step must lie in (0, 1]");
    require(coefficient >= 0.0 && coefficient < 1.0, "scan_sieve_quality: coefficient must lie in [0, 1)");
    require(D_exponent_value > 0.0, "scan_sieve_quality: D exponent must be positive");
    SieveQualityScan out;
    out.coefficient = coefficient;
    const auto steps = static_cast<long>(std::floor(1.0 / grid_step + 1e-9));
    out.all_negative = true;
    for (long i = 0; i <= steps; ++i) {
        const double s = std::min(3.0, 2.0 + static_cast<double>(i) * grid_step);
        const auto v = sieve_functions(s);
        const double obj = v.f - coefficient * v.F;
        out.points.push_back({s, obj});
        if (obj >= 0.0) out.all_negative = false;
        if (i == 0 || obj > out.best_objective) {
            out.best_objective = obj;
            out.best_s = s;
        }
    }
    if (out.points.back().s < 3.0) {
        const auto v = sieve_functions(3.0);
        const double obj = v.f - coefficient * v.F;
        out.points.push_back({3.0, obj});
        if (obj >= 0.0) out.all_negative = false;
        if (obj > out.best_objective) {
            out.best_objective = obj;
            out.best_s = 3.0;
        }
    }
    out.best_beta = D_exponent_value / out.best_s;
    out.best_h = static_cast<long>(std::floor(1.0 / out.best_beta));
    return out;
}

} // namespace pdi
