#pragma once

/// @file kernel.hpp
/// @brief The compactly supported smoothing kernel theta and its Fourier
/// transform Theta.
///
/// theta is the indicator of [-a, a] averaged k times over boxes of half
/// width delta, with a = 7 vartheta / 8 and delta = vartheta / (8k). Hence
/// theta = 1 on |y| <= 3 vartheta / 4, theta = 0 on |y| >= vartheta, and
///
///   Theta(x) = sin(2 pi a x) / (pi x) * (sin(2 pi delta x) / (2 pi delta x))^k.
///
/// Equivalently theta(y) = P(|y - S| <= a) where S is a sum of k independent
/// uniforms on [-delta, delta], so theta is evaluated exactly through the
/// Irwin-Hall distribution function.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pdi/error.hpp"
#include "pdi/numeric.hpp"

namespace pdi {

inline constexpr int default_kernel_order = 8;
inline constexpr int max_kernel_order = 32;

struct KernelSpec {
    double vartheta = 0.0;
    int k = default_kernel_order;
    double a = 0.0;
    double delta = 0.0;

    static KernelSpec make(double vartheta, int k = default_kernel_order) {
        require(vartheta > 0.0 && std::isfinite(vartheta), "KernelSpec: vartheta must be positive");
        require(k >= 1 && k <= max_kernel_order, "KernelSpec: k must lie in [1, 32]");
        return KernelSpec{vartheta, k, 7.0 * vartheta / 8.0, vartheta / (8.0 * k)};
    }

    double plateau() const { return 0.75 * vartheta; }
    double support() const { return vartheta; }
};

namespace detail {

/// CDF of the sum of k independent U[0, 1] at x.
inline double irwin_hall_cdf(int k, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= k) return 1.0;
    bool flip = false;
    if (x > 0.5 * k) {
        x = k - x;
        flip = true;
    }
    long double acc = 0.0L;
    long double binom = 1.0L;
    long double fact = 1.0L;
    for (int i = 2; i <= k; ++i) fact *= i;
    const int top = static_cast<int>(std::floor(x));
    for (int j = 0; j <= top; ++j) {
        const long double term = binom * std::pow(static_cast<long double>(x) - j, k);
        acc += (j % 2) ? -term : term;
        binom = binom * (k - j) / (j + 1);
    }
    const double v = static_cast<double>(acc / fact);
    const double clamped = std::clamp(v, 0.0, 1.0);
    return flip ? 1.0 - clamped : clamped;
}

} // namespace detail

inline double theta_eval(const KernelSpec& spec, double y) {
    const double ay = std::fabs(y);
    if (ay <= spec.plateau()) return 1.0;
    if (ay >= spec.support()) return 0.0;
    // S ranges over [-k delta, k delta]; F_S(t) = IH((t + k delta) / (2 delta)).
    const double kd = spec.k * spec.delta;
    const double two_d = 2.0 * spec.delta;
    const double upper = detail::irwin_hall_cdf(spec.k, (ay + spec.a + kd) / two_d);
    const double lower = detail::irwin_hall_cdf(spec.k, (ay - spec.a + kd) / two_d);
    return std::clamp(upper - lower, 0.0, 1.0);
}

inline double theta_fourier(const KernelSpec& spec, double x) {
    if (x == 0.0) return 2.0 * spec.a;
    const double pi = std::numbers::pi;
    const double main = std::sin(2.0 * pi * spec.a * x) / (pi * x);
    const double arg = 2.0 * pi * spec.delta * x;
    const double sinc = std::sin(arg) / arg;
    return main * std::pow(sinc, spec.k);
}

/// The three branches 7 vartheta / 4, 1 / (pi |x|) and
/// (1 / (pi |x|)) (k / (2 pi |x| vartheta / 8))^k.
struct KernelBound {
    double plateau_branch = 0.0;
    double first_branch = 0.0;
    double decay_branch = 0.0;
    double min() const { return std::min({plateau_branch, first_branch, decay_branch}); }
};

inline KernelBound kernel_bound(const KernelSpec& spec, double x) {
    const double pi = std::numbers::pi;
    const double ax = std::fabs(x);
    KernelBound b;
    b.plateau_branch = 1.75 * spec.vartheta;
    if (ax == 0.0) {
        b.first_branch = b.decay_branch = std::numeric_limits<double>::infinity();
        return b;
    }
    b.first_branch = 1.0 / (pi * ax);
    b.decay_branch = b.first_branch * std::pow(spec.k / (2.0 * pi * ax * spec.vartheta / 8.0), spec.k);
    return b;
}

struct KernelBoundReport {
    std::size_t points = 0;
    std::size_t violations = 0;   ///< |Theta| above min branch by more than 1e-12 relative
    double max_slack = -std::numeric_limits<double>::infinity(); ///< max of |Theta| - bound
    double max_relative_slack = -std::numeric_limits<double>::infinity();
    double worst_x = 0.0;
};

inline KernelBoundReport verify_kernel_bounds(const KernelSpec& spec, const std::vector<double>& xs) {
    require(!xs.empty(), "verify_kernel_bounds: empty grid");
    KernelBoundReport r;
    for (double x : xs) {
        const double value = std::fabs(theta_fourier(spec, x));
        const double bound = kernel_bound(spec, x).min();
        const double slack = value - bound;
        const double rel = bound > 0.0 ? slack / bound : slack;
        ++r.points;
        if (value > bound * (1.0 + 1e-12)) ++r.violations;
        if (slack > r.max_slack) r.max_slack = slack;
        if (rel > r.max_relative_slack) {
            r.max_relative_slack = rel;
            r.worst_x = x;
        }
    }
    return r;
}

/// `count` points spaced logarithmically on [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    require(lo > 0.0 && hi > lo && count >= 2, "log_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> xs(count);
    const double r = std::log(hi / lo);
    for (std::size_t i = 0; i < count; ++i)
        xs[i] = lo * std::exp(r * static_cast<double>(i) / static_cast<double>(count - 1));
    xs.back() = hi;
    return xs;
}

/// Integral of the decay branch over |x| > T (both sides).
inline double kernel_tail_bound(const KernelSpec& spec, double T) {
    require(T > 0.0, "kernel_tail_bound: T must be positive");
    const double pi = std::numbers::pi;
    const double C = 4.0 * spec.k / (pi * spec.vartheta);
    return 2.0 / pi * std::pow(C / T, spec.k) / spec.k;
}

struct RoundtripReport {
    double max_quadrature_error = 0.0; ///< sup over the y grid
    double tail_bound = 0.0;
    double worst_y = 0.0;
    double total() const { return max_quadrature_error + tail_bound; }
};

/// sup_y |theta(y) - int_{-T}^{T} Theta(x) e(xy) dx| over an even y grid on
/// [-y_max, y_max], plus the analytic tail bound beyond T.
inline RoundtripReport fourier_roundtrip_error(const KernelSpec& spec, double T, double quad_step,
                                               double y_max = -1.0, std::size_t y_points = 201) {
    require(T > 0.0, "fourier_roundtrip_error: T must be positive");
    if (y_max <= 0.0) y_max = 2.0 * spec.vartheta;
    require(quad_step > 0.0, "fourier_roundtrip_error: quad_step must be positive");
    require(quad_step <= 1.0 / (8.0 * (y_max + spec.vartheta)),
            "fourier_roundtrip_error: quad_step too coarse for the y band (need step <= 1/(8 (|y|max + vartheta)))");
    require(y_points >= 2, "fourier_roundtrip_error: need at least two y points");

    auto panels = static_cast<std::size_t>(std::ceil(T / quad_step));
    if (panels % 2) ++panels;
    const double h = T / static_cast<double>(panels);
    std::vector<double> w(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        const double simpson = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        w[i] = simpson * h / 3.0 * theta_fourier(spec, h * static_cast<double>(i));
    }

    RoundtripReport r;
    r.tail_bound = kernel_tail_bound(spec, T);
    for (std::size_t j = 0; j < y_points; ++j) {
        const double y = -y_max + 2.0 * y_max * static_cast<double>(j) / static_cast<double>(y_points - 1);
        // Theta is even, so the inverse transform is a cosine integral.
        compensated_sum<double> acc;
        for (std::size_t i = 0; i <= panels; ++i) acc += w[i] * std::cos(two_pi * h * static_cast<double>(i) * y);
        const double err = std::fabs(theta_eval(spec, y) - 2.0 * acc.value());
        if (err > r.max_quadrature_error) {
            r.max_quadrature_error = err;
            r.worst_y = y;
        }
    }
    return r;
}

} // namespace pdi
