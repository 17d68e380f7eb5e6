#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

namespace pdi {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// e(x) = exp(2 pi i x), with the argument reduced mod 1 first.
inline cplx unit_phase(double x) {
    const double r = x - std::nearbyint(x);
    return {std::cos(two_pi * r), std::sin(two_pi * r)};
}

/// Neumaier-compensated accumulator.
template <typename T>
class compensated_sum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (magnitude(sum_) >= magnitude(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    compensated_sum& operator+=(T x) {
        add(x);
        return *this;
    }
    T value() const { return sum_ + comp_; }

private:
    static double magnitude(double v) { return std::fabs(v); }
    static double magnitude(const cplx& v) { return std::fabs(v.real()) + std::fabs(v.imag()); }

    T sum_{};
    T comp_{};
};

// 5-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 5> gl5_nodes{
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
inline constexpr std::array<double, 5> gl5_weights{
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
    0.2369268850561891};

template <typename F>
double gauss_legendre5(F&& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl5_nodes.size(); ++i) acc += gl5_weights[i] * f(mid + half * gl5_nodes[i]);
    return acc * half;
}

/// Composite Simpson on [lo, hi] with an even panel count >= n.
template <typename F>
double simpson(F&& f, double lo, double hi, std::size_t n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (hi - lo) / static_cast<double>(n);
    double acc = f(lo) + f(hi);
    for (std::size_t i = 1; i < n; ++i) acc += f(lo + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace pdi
