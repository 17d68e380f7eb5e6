#pragma once

/// @file expsum.hpp
/// @brief Sieve-weighted exponential sums over primes
///
///   L(t) = sum_{d | P(z)} lambda(d) sum_{X/2 < p <= X, p + 2 = 0 (d)} e(p^c t) log p,
///
/// the oscillatory integral I(alpha) = int_{X/2}^{X} e(alpha t^c) dt, the main
/// term I(t) G and the moment and supremum quantities built from them.
///
/// L is evaluated through the collapsed per-prime coefficient
/// Lambda(p + 2) log p; the residue-class double sum is kept as a second,
/// independent route.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pdi/error.hpp"
#include "pdi/instance.hpp"
#include "pdi/numeric.hpp"
#include "pdi/parallel.hpp"
#include "pdi/primes.hpp"
#include "pdi/sieve.hpp"

namespace pdi {

/// Which weight table multiplies the prime sum; `unsieved` is {1 -> 1}.
enum class WeightSign { plus, minus, unsieved };

inline const char* to_string(WeightSign s) {
    switch (s) {
    case WeightSign::plus: return "plus";
    case WeightSign::minus: return "minus";
    case WeightSign::unsieved: return "unsieved";
    }
    return "?";
}

class ExpSumContext {
public:
    /// Primes in (X/2, X], weight tables from (D, z). For z < 3 the sifting
    /// set is empty and both tables collapse to {1 -> 1}.
    static ExpSumContext build(const ProblemInstance& in, std::size_t weight_cap = default_weight_cap) {
        require(in.X >= 4.0, "ExpSumContext: X must be >= 4");
        const auto hi = static_cast<u64>(std::floor(in.X));
        const auto lo = static_cast<u64>(std::floor(in.X / 2.0));
        return build(in, sieve_primes(lo, hi), weight_cap);
    }

    /// Same, over an explicit prime list (toy instances).
    static ExpSumContext build(const ProblemInstance& in, std::vector<u64> primes,
                               std::size_t weight_cap = default_weight_cap) {
        if (in.z < 3.0)
            return build(in, std::move(primes), RosserWeights::unit(SieveSign::plus, in.D, in.z),
                         RosserWeights::unit(SieveSign::minus, in.D, in.z));
        return build(in, std::move(primes), build_rosser(in.D, in.z, SieveSign::plus, weight_cap),
                     build_rosser(in.D, in.z, SieveSign::minus, weight_cap));
    }

    static ExpSumContext build(const ProblemInstance& in, std::vector<u64> primes, RosserWeights plus,
                               RosserWeights minus) {
        for (u64 p : primes) require(is_prime_trial(p), "ExpSumContext: " + std::to_string(p) + " is not prime");
        require(std::is_sorted(primes.begin(), primes.end()), "ExpSumContext: primes must be ascending");
        ExpSumContext ctx;
        ctx.instance_ = in;
        ctx.primes_ = std::move(primes);
        ctx.plus_ = std::move(plus);
        ctx.minus_ = std::move(minus);
        ctx.unit_ = RosserWeights::unit();
        ctx.index();
        return ctx;
    }

    const ProblemInstance& instance() const noexcept { return instance_; }
    const std::vector<u64>& primes() const noexcept { return primes_; }
    std::size_t size() const noexcept { return primes_.size(); }

    const RosserWeights& weights(WeightSign s) const {
        switch (s) {
        case WeightSign::plus: return plus_;
        case WeightSign::minus: return minus_;
        default: return unit_;
        }
    }

    /// p^c for each prime.
    const std::vector<double>& powers() const noexcept { return powers_; }
    const std::vector<double>& logs() const noexcept { return logs_; }
    /// Lambda(p + 2) for each prime (1 for unsieved).
    const std::vector<long>& lambda_sums(WeightSign s) const {
        return s == WeightSign::plus ? lam_plus_ : s == WeightSign::minus ? lam_minus_ : lam_unit_;
    }
    /// [(p + 2, P(z)) = 1] for each prime.
    const std::vector<char>& coprime() const noexcept { return coprime_; }
    /// Lambda(p + 2) log p.
    const std::vector<double>& coefficients(WeightSign s) const {
        return s == WeightSign::plus ? coef_plus_ : s == WeightSign::minus ? coef_minus_ : logs_;
    }

    /// Indices of the primes with d | p + 2, for d in either weight table.
    const std::vector<std::size_t>& residue_class(u64 d) const {
        static const std::vector<std::size_t> empty;
        auto it = residues_.find(d);
        return it == residues_.end() ? empty : it->second;
    }

    double g(WeightSign s) const {
        return s == WeightSign::plus ? g_plus_ : s == WeightSign::minus ? g_minus_ : 1.0;
    }

private:
    void index() {
        const double c = instance_.c;
        const double z = instance_.z;
        for (u64 p : primes_) {
            powers_.push_back(std::pow(static_cast<double>(p), c));
            logs_.push_back(std::log(static_cast<double>(p)));
            const auto sifted = sifted_part(factorize_trial(p + 2), z);
            lam_plus_.push_back(lambda_sum(plus_, sifted));
            lam_minus_.push_back(lambda_sum(minus_, sifted));
            lam_unit_.push_back(1);
            coprime_.push_back(sifted.empty() ? 1 : 0);
            coef_plus_.push_back(static_cast<double>(lam_plus_.back()) * logs_.back());
            coef_minus_.push_back(static_cast<double>(lam_minus_.back()) * logs_.back());
            const std::size_t k = sifted.size();
            for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
                u64 d = 1;
                for (std::size_t j = 0; j < k; ++j)
                    if (mask >> j & 1) d *= sifted[j];
                if (plus_.lambda(d) != 0 || minus_.lambda(d) != 0 || d == 1)
                    residues_[d].push_back(powers_.size() - 1);
            }
        }
        g_plus_ = g_sum(plus_);
        g_minus_ = g_sum(minus_);
    }

    ProblemInstance instance_;
    std::vector<u64> primes_;
    RosserWeights plus_, minus_, unit_;
    std::vector<double> powers_, logs_, coef_plus_, coef_minus_;
    std::vector<long> lam_plus_, lam_minus_, lam_unit_;
    std::vector<char> coprime_;
    std::map<u64, std::vector<std::size_t>> residues_;
    double g_plus_ = 1.0, g_minus_ = 1.0;
};

// ---------------------------------------------------------------------------
// L(t)

/// sum_k coef_k e(freq_k t).
inline cplx weighted_phase_sum(std::span<const double> freq, std::span<const double> coef, double t) {
    compensated_sum<cplx> acc;
    for (std::size_t i = 0; i < freq.size(); ++i)
        if (coef[i] != 0.0) acc += coef[i] * unit_phase(freq[i] * t);
    return acc.value();
}

inline cplx L_sum(const ExpSumContext& ctx, WeightSign sign, double t) {
    return weighted_phase_sum(ctx.powers(), ctx.coefficients(sign), t);
}

/// The double sum over d and the residue class of d, evaluated literally.
inline cplx L_sum_by_residue(const ExpSumContext& ctx, WeightSign sign, double t) {
    compensated_sum<cplx> acc;
    for (const auto& e : ctx.weights(sign).entries()) {
        cplx inner = 0.0;
        for (std::size_t i : ctx.residue_class(e.d)) inner += ctx.logs()[i] * unit_phase(ctx.powers()[i] * t);
        acc += static_cast<double>(e.lambda) * inner;
    }
    return acc.value();
}

/// sum_d |lambda(d)| sum_{p = -2 (d)} log p, the triangle-inequality bound on |L|.
inline double L_trivial_bound(const ExpSumContext& ctx, WeightSign sign) {
    double acc = 0.0;
    for (const auto& e : ctx.weights(sign).entries())
        for (std::size_t i : ctx.residue_class(e.d)) acc += std::abs(e.lambda) * ctx.logs()[i];
    return acc;
}

/// L at t0 + j h for j = 0..n-1, by per-prime phase rotation resynchronised
/// every 256 steps.
inline std::vector<cplx> L_trace(const ExpSumContext& ctx, WeightSign sign, double t0, double h, std::size_t n) {
    std::vector<cplx> out(n);
    const auto& freq = ctx.powers();
    const auto& coef = ctx.coefficients(sign);
    std::vector<cplx> rot(freq.size()), step(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) step[i] = unit_phase(freq[i] * h);
    for (std::size_t j = 0; j < n; ++j) {
        if (j % 256 == 0)
            for (std::size_t i = 0; i < freq.size(); ++i)
                rot[i] = unit_phase(freq[i] * (t0 + h * static_cast<double>(j)));
        cplx acc = 0.0;
        for (std::size_t i = 0; i < freq.size(); ++i) {
            acc += coef[i] * rot[i];
            rot[i] *= step[i];
        }
        out[j] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// I(alpha)

namespace detail {

/// int_0^h e^{i w v} dv and int_0^h v e^{i w v} dv.
inline std::pair<cplx, cplx> linear_phase_moments(double w, double h) {
    const double x = w * h;
    const cplx i1(0.0, 1.0);
    if (std::fabs(x) < 1e-2) {
        cplx e0 = 0.0, e1 = 0.0, term = 1.0; // term = (i x)^n / n!
        for (int n = 0; n < 12; ++n) {
            e0 += term / static_cast<double>(n + 1);
            e1 += term / static_cast<double>(n + 2);
            term *= i1 * x / static_cast<double>(n + 1);
        }
        return {h * e0, h * h * e1};
    }
    const cplx ex = std::polar(1.0, x);
    const cplx iw = i1 * w;
    const cplx e0 = (ex - 1.0) / iw;
    const cplx e1 = h * ex / iw - (ex - 1.0) / (iw * iw);
    return {e0, e1};
}

/// Filon rule with n panels: amplitude (u^{1/c - 1} / c) linearly
/// interpolated per panel, phase e(alpha u) integrated exactly.
inline cplx filon_I(double alpha, double lo, double hi, double c, std::size_t n) {
    const double h = (hi - lo) / static_cast<double>(n);
    const double w = two_pi * alpha;
    const auto [e0, e1] = linear_phase_moments(w, h);
    const double expo = 1.0 / c - 1.0;
    auto g = [&](double u) { return std::pow(u, expo) / c; };
    compensated_sum<cplx> acc;
    double g0 = g(lo);
    for (std::size_t k = 0; k < n; ++k) {
        const double u0 = lo + h * static_cast<double>(k);
        const double u1 = (k + 1 == n) ? hi : lo + h * static_cast<double>(k + 1);
        const double g1 = g(u1);
        acc += unit_phase(alpha * u0) * (g0 * e0 + (g1 - g0) / h * e1);
        g0 = g1;
    }
    return acc.value();
}

} // namespace detail

/// I(alpha) = int_{X/2}^{X} e(alpha t^c) dt via u = t^c. Panels start at
/// one per phase cycle (at least 16) and are doubled until two successive
/// Filon values differ by at most 3 tol twice in a row; a single agreement
/// can be a coincidence of node phases. The returned value is
/// Richardson-extrapolated. tol defaults to 1e-8 X.
inline cplx I_integral(double alpha, double X, double c, double tol = -1.0, std::size_t max_panels = std::size_t{1} << 22) {
    require(X > 0.0, "I_integral: X must be positive");
    require(c >= 1.0, "I_integral: c must be >= 1");
    if (tol <= 0.0) tol = 1e-8 * X;
    if (alpha == 0.0) return {X / 2.0, 0.0};
    const double lo = std::pow(X / 2.0, c);
    const double hi = std::pow(X, c);
    const double cycles = std::fabs(alpha) * (hi - lo);
    std::size_t n = 16;
    while (n < cycles && n < max_panels / 4) n *= 2;
    cplx prev = detail::filon_I(alpha, lo, hi, c, n);
    int agreed = 0;
    for (;;) {
        n *= 2;
        const cplx cur = detail::filon_I(alpha, lo, hi, c, n);
        const double diff = std::abs(cur - prev);
        agreed = diff <= 3.0 * tol ? agreed + 1 : 0;
        if (agreed == 2) return cur + (cur - prev) / 3.0;
        if (n >= max_panels)
            throw convergence_error("I_integral: panel refinement cap reached, achieved tolerance " +
                                        std::to_string(diff / 3.0),
                                    diff / 3.0);
        prev = cur;
    }
}

/// (e(alpha X) - e(alpha X / 2)) / (2 pi i alpha): I at c = 1.
inline cplx I_closed_form_c1(double alpha, double X) {
    if (alpha == 0.0) return {X / 2.0, 0.0};
    return (unit_phase(alpha * X) - unit_phase(alpha * X / 2.0)) / cplx(0.0, two_pi * alpha);
}

struct DecayReport {
    double constant = 0.0;  ///< C = 2 / (pi c (1/2)^{c-1})
    double max_ratio = 0.0; ///< max |I(alpha)| / (X^{1-c} / |alpha|)
    double worst_alpha = 0.0;
    std::size_t violations = 0; ///< ratio > C
};

/// |I(alpha)| <= C X^{1-c} / |alpha|, C from the first-derivative test with
/// H = 1, h = |alpha| c (X/2)^{c-1}, and a margin of 2.
inline DecayReport decay_check(double X, double c, const std::vector<double>& alphas) {
    require(c >= 1.0, "decay_check: c must be >= 1");
    DecayReport r;
    r.constant = 2.0 / (std::numbers::pi * c * std::pow(0.5, c - 1.0));
    for (double a : alphas) {
        require(a != 0.0, "decay_check: alpha grid must exclude 0");
        const double ratio = std::abs(I_integral(a, X, c)) / (std::pow(X, 1.0 - c) / std::fabs(a));
        if (ratio > r.max_ratio) {
            r.max_ratio = ratio;
            r.worst_alpha = a;
        }
        if (ratio > r.constant) ++r.violations;
    }
    return r;
}

inline cplx main_term(const ExpSumContext& ctx, WeightSign sign, double t) {
    const auto& in = ctx.instance();
    return I_integral(t, in.X, in.c) * ctx.g(sign);
}

struct ResidualReport {
    double sup_residual = 0.0;
    double at_t = 0.0;
    double comparison = 0.0; ///< X / (log X)^A
    double ratio_A2 = 0.0;   ///< sup |L - M| / (X / (log X)^2)
};

inline ResidualReport asymptotic_residual(const ExpSumContext& ctx, WeightSign sign, const std::vector<double>& ts) {
    const auto& in = ctx.instance();
    ResidualReport r;
    for (double t : ts) {
        const double res = std::abs(L_sum(ctx, sign, t) - main_term(ctx, sign, t));
        if (res > r.sup_residual) {
            r.sup_residual = res;
            r.at_t = t;
        }
    }
    const double lx = std::log(in.X);
    r.comparison = in.X / std::pow(lx, in.A);
    r.ratio_A2 = r.sup_residual / (in.X / (lx * lx));
    return r;
}

// ---------------------------------------------------------------------------
// Moments

/// Step resolving the fastest phase X^c t: 1 / (8 c X^c).
inline double phase_resolving_step(double X, double c) { return 1.0 / (8.0 * c * std::pow(X, c)); }

struct MomentReport {
    double value = 0.0;
    double coarse_value = 0.0; ///< same rule at twice the step
    double reference = 0.0;
    double ratio = 0.0;
    double step = 0.0;
    std::size_t points = 0;
};

/// int_{-tau}^{tau} |L|^2 by the trapezoid rule; reference X^{2-c} log^6 X.
inline MomentReport mean_square(const ExpSumContext& ctx, WeightSign sign, double tau) {
    require(tau > 0.0, "mean_square: tau must be positive");
    const auto& in = ctx.instance();
    const double target = std::min(tau / 200.0, phase_resolving_step(in.X, in.c));
    auto n = static_cast<std::size_t>(std::ceil(tau / target));
    if (n % 2) ++n;
    const double h = tau / static_cast<double>(n);
    const auto trace = L_trace(ctx, sign, 0.0, h, n + 1);
    auto trap = [&](std::size_t stride) {
        compensated_sum<double> acc;
        for (std::size_t j = 0; j <= n; j += stride) {
            const double v = std::norm(trace[j]);
            acc += (j == 0 || j == n) ? 0.5 * v : v;
        }
        return 2.0 * acc.value() * h * static_cast<double>(stride);
    };
    MomentReport r;
    r.value = trap(1);
    r.coarse_value = trap(2);
    r.step = h;
    r.points = n + 1;
    const double lx = std::log(in.X);
    r.reference = std::pow(in.X, 2.0 - in.c) * std::pow(lx, 6);
    r.ratio = r.value / r.reference;
    return r;
}

/// int_0^1 |L|^order for order 2 or 4, trapezoid with step <= 1/(8 c X^c).
/// References: X log^5 X (order 2), X^{4-c+eta} (order 4).
inline MomentReport unit_interval_moment(const ExpSumContext& ctx, WeightSign sign, int order,
                                         double budget = 4e9, unsigned threads = 1) {
    require(order == 2 || order == 4, "unit_interval_moment: order must be 2 or 4");
    const auto& in = ctx.instance();
    auto n = static_cast<std::size_t>(std::ceil(1.0 / phase_resolving_step(in.X, in.c)));
    if (n % 2) ++n;
    const double cost = static_cast<double>(n) * static_cast<double>(std::max<std::size_t>(ctx.size(), 1));
    if (cost > budget)
        throw resource_cap_error("unit_interval_moment: " + std::to_string(cost) +
                                 " term evaluations exceed the budget; use a smaller X");
    const double h = 1.0 / static_cast<double>(n);
    MomentReport r;
    r.step = h;
    r.points = n + 1;
    if (!ctx.size()) return r;

    // Fixed chunking so the result does not depend on the thread count.
    constexpr std::size_t chunk = 4096;
    const std::size_t chunks = (n + 1 + chunk - 1) / chunk;
    std::vector<double> fine(chunks), coarse(chunks);
    parallel_chunks(chunks, threads, [&](std::size_t k) {
        const std::size_t j0 = k * chunk;
        const std::size_t len = std::min(chunk, n + 1 - j0);
        const auto tr = L_trace(ctx, sign, h * static_cast<double>(j0), h, len);
        compensated_sum<double> f, c2;
        for (std::size_t j = 0; j < len; ++j) {
            const std::size_t idx = j0 + j;
            const double m2 = std::norm(tr[j]);
            const double v = order == 2 ? m2 : m2 * m2;
            const double w = (idx == 0 || idx == n) ? 0.5 : 1.0;
            f += w * v;
            if (idx % 2 == 0) c2 += w * v;
        }
        fine[k] = f.value();
        coarse[k] = c2.value();
    });
    compensated_sum<double> f, c2;
    for (std::size_t k = 0; k < chunks; ++k) {
        f += fine[k];
        c2 += coarse[k];
    }
    r.value = f.value() * h;
    r.coarse_value = c2.value() * 2.0 * h;
    const double lx = std::log(in.X);
    r.reference = order == 2 ? in.X * std::pow(lx, 5) : std::pow(in.X, 4.0 - in.c + in.eta);
    r.ratio = r.value / r.reference;
    return r;
}

// ---------------------------------------------------------------------------
// Intermediate range

/// X^eta (X^{1/3+c/2} D K^{1/2} + X^{3/4+c/6} D^{2/3} K^{1/6} + X^{1-c/6} D^{1/3} tau^{-1/6}).
inline double intermediate_reference(double X, double c, double D, double K, double tau, double eta) {
    return std::pow(X, eta) *
           (std::pow(X, 1.0 / 3.0 + c / 2.0) * D * std::sqrt(K) +
            std::pow(X, 0.75 + c / 6.0) * std::pow(D, 2.0 / 3.0) * std::pow(K, 1.0 / 6.0) +
            std::pow(X, 1.0 - c / 6.0) * std::cbrt(D) * std::pow(tau, -1.0 / 6.0));
}

struct SupReport {
    double sup = 0.0;
    double at_t = 0.0;
    std::size_t points = 0;
    double reference = 0.0;
};

/// max of |L(t)| over [tau, K]; by conjugate symmetry the negative half is
/// identical. The grid is logarithmic with `per_octave` points per octave,
/// with spacing additionally capped at `max_step` so the oscillation of the
/// fastest phase is resolved. max_step <= 0 selects 1 / (8 c X^c).
inline SupReport intermediate_sup(const ExpSumContext& ctx, WeightSign sign, double tau, double K,
                                  std::size_t per_octave = 64, double max_step = -1.0,
                                  std::size_t max_points = 50'000'000) {
    require(tau > 0.0 && K > tau, "intermediate_sup: need 0 < tau < K");
    require(per_octave >= 64, "intermediate_sup: grid density must be >= 64 points per octave");
    const auto& in = ctx.instance();
    if (max_step <= 0.0) max_step = phase_resolving_step(in.X, in.c);
    const double ratio = std::exp2(1.0 / static_cast<double>(per_octave)) - 1.0;
    // Point count: log part plus linear part, estimated before evaluating.
    const double t_switch = std::clamp(max_step / ratio, tau, K);
    const double estimate = std::log2(t_switch / tau) * static_cast<double>(per_octave) + (K - t_switch) / max_step;
    if (estimate > static_cast<double>(max_points))
        throw resource_cap_error("intermediate_sup: about " + std::to_string(estimate) +
                                 " grid points exceed the cap; lower K or X");
    SupReport r;
    for (double t = tau;; t = std::min(K, t + std::min(t * ratio, max_step))) {
        const double v = std::abs(L_sum(ctx, sign, t));
        ++r.points;
        if (v > r.sup) {
            r.sup = v;
            r.at_t = t;
        }
        if (t >= K) break;
    }
    r.reference = intermediate_reference(in.X, in.c, in.D, K, tau, in.eta);
    return r;
}

} // namespace pdi
