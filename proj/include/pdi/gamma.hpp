#pragma once

/// @file gamma.hpp
/// @brief Weighted counts of prime quadruples with p1^c + p2^c + p3^c + p4^c
/// near N: the direct count with a sharp window, the theta-smoothed counts
/// with sieve multipliers, the Fourier-side evaluation of the mixed count,
/// the singular integral B(X), the main-term prediction and witnesses.
///
/// Every quadruple count is a meet-in-the-middle join: pairs (p3, p4) go
/// into a table sorted by p3^c + p4^c, and for each (p1, p2) the window of
/// complements around N - p1^c - p2^c is found by binary search.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "pdi/error.hpp"
#include "pdi/expsum.hpp"
#include "pdi/kernel.hpp"
#include "pdi/numeric.hpp"
#include "pdi/parallel.hpp"
#include "pdi/primes.hpp"

namespace pdi {

inline constexpr std::size_t default_join_prime_cap = 6000;
inline constexpr std::size_t default_witness_limit = 100;

// ---------------------------------------------------------------------------
// Generic join

/// How the quadruple terms are added up. `canonical` adds them in the order
/// of a lexicographic 4-nested loop over prime indices with a plain double,
/// reproducing that loop bit for bit; `compensated` sums per chunk of p1 and
/// reduces chunks in order.
enum class Summation { compensated, canonical };

struct JoinOptions {
    double N = 0.0;
    double radius = 0.0; ///< terms with |sum - N| < radius; infinity means all
    Summation summation = Summation::compensated;
    unsigned threads = 1;
    std::size_t prime_cap = default_join_prime_cap;
    std::size_t witness_limit = 0; ///< canonical (sorted) hits to keep, best by distance
};

/// A hit with i <= j <= k <= l in prime-index order.
struct CanonicalHit {
    std::array<std::size_t, 4> idx{};
    double form_value = 0.0;
    double distance = 0.0;
};

inline bool hit_before(const CanonicalHit& a, const CanonicalHit& b) {
    return std::tie(a.distance, a.idx) < std::tie(b.distance, b.idx);
}

struct JoinResult {
    double value = 0.0;
    std::uint64_t ordered_hits = 0;      ///< ordered quadruples inside the window with nonzero weight
    std::uint64_t canonical_hits = 0;    ///< of which i <= j <= k <= l
    std::uint64_t left_pairs = 0;
    std::uint64_t right_pairs = 0;
    std::uint64_t window_probes = 0;     ///< complements examined over all windows
    std::vector<CanonicalHit> best;      ///< up to witness_limit, sorted by (distance, indices)
};

namespace detail {

struct RightPair {
    double value;
    double weight;
    std::uint32_t k, l;
};

inline void keep_best(std::vector<CanonicalHit>& v, std::size_t limit) {
    if (v.size() <= limit) return;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(limit), v.end(), hit_before);
    v.resize(limit);
}

} // namespace detail

/// sum over (i, j, k, l) of (w1[i] w2[j]) (w3[k] w4[l]) window(y), with
/// y = (pc[i] + pc[j]) + (pc[k] + pc[l]) - N restricted to |y| < radius.
template <typename Window>
JoinResult quadruple_join(const std::vector<double>& pc, const std::array<std::vector<double>, 4>& w,
                          const JoinOptions& opt, Window&& window) {
    const std::size_t n = pc.size();
    for (const auto& v : w) require(v.size() == n, "quadruple_join: weight length mismatch");
    require(opt.radius >= 0.0, "quadruple_join: radius must be >= 0");
    std::size_t active = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (w[0][i] != 0.0 || w[1][i] != 0.0 || w[2][i] != 0.0 || w[3][i] != 0.0) ++active;
    if (active > opt.prime_cap)
        throw resource_cap_error("quadruple_join: " + std::to_string(active) + " primes exceed the cap of " +
                                 std::to_string(opt.prime_cap));

    std::vector<detail::RightPair> right;
    for (std::size_t k = 0; k < n; ++k) {
        if (w[2][k] == 0.0) continue;
        for (std::size_t l = 0; l < n; ++l) {
            if (w[3][l] == 0.0) continue;
            right.push_back({pc[k] + pc[l], w[2][k] * w[3][l], static_cast<std::uint32_t>(k),
                             static_cast<std::uint32_t>(l)});
        }
    }
    std::sort(right.begin(), right.end(), [](const auto& a, const auto& b) {
        return std::tie(a.value, a.k, a.l) < std::tie(b.value, b.k, b.l);
    });

    JoinResult res;
    res.right_pairs = right.size();
    const bool all = std::isinf(opt.radius);
    // Slack so the binary-searched window is a superset of the exact test.
    const double slack = 1e-9 * std::max(1.0, std::fabs(opt.N));
    const bool canonical = opt.summation == Summation::canonical;

    struct Chunk {
        compensated_sum<double> sum;
        std::vector<double> terms;
        std::uint64_t ordered = 0, canon = 0, left = 0, probes = 0;
        std::vector<CanonicalHit> best;
    };
    std::vector<Chunk> chunks(n);
    parallel_chunks(n, opt.threads, [&](std::size_t i) {
        Chunk& ch = chunks[i];
        if (w[0][i] == 0.0) return;
        struct Local {
            std::uint32_t k, l;
            double term;
        };
        std::vector<Local> hits;
        for (std::size_t j = 0; j < n; ++j) {
            if (w[1][j] == 0.0) continue;
            ++ch.left;
            const double vl = pc[i] + pc[j];
            const double wl = w[0][i] * w[1][j];
            auto first = right.begin();
            auto last = right.end();
            if (!all) {
                const double target = opt.N - vl;
                first = std::lower_bound(right.begin(), right.end(), target - opt.radius - slack,
                                         [](const auto& r, double v) { return r.value < v; });
                last = std::upper_bound(first, right.end(), target + opt.radius + slack,
                                        [](double v, const auto& r) { return v < r.value; });
            }
            hits.clear();
            for (auto it = first; it != last; ++it) {
                ++ch.probes;
                const double y = (vl + it->value) - opt.N;
                if (!all && !(std::fabs(y) < opt.radius)) continue;
                const double term = (wl * it->weight) * window(y);
                ++ch.ordered;
                hits.push_back({it->k, it->l, term});
                const std::size_t k = it->k, l = it->l;
                if (i <= j && j <= k && k <= l) {
                    ++ch.canon;
                    if (opt.witness_limit) {
                        ch.best.push_back({{i, j, k, l}, vl + it->value, std::fabs(y)});
                        if (ch.best.size() > 4 * opt.witness_limit) detail::keep_best(ch.best, opt.witness_limit);
                    }
                }
            }
            if (canonical) {
                std::sort(hits.begin(), hits.end(),
                          [](const Local& a, const Local& b) { return std::tie(a.k, a.l) < std::tie(b.k, b.l); });
                for (const auto& h : hits) ch.terms.push_back(h.term);
            } else {
                for (const auto& h : hits) ch.sum += h.term;
            }
        }
        detail::keep_best(ch.best, opt.witness_limit);
    });

    compensated_sum<double> total;
    double plain = 0.0;
    for (auto& ch : chunks) {
        if (canonical)
            for (double t : ch.terms) plain += t;
        else
            total += ch.sum.value();
        res.ordered_hits += ch.ordered;
        res.canonical_hits += ch.canon;
        res.left_pairs += ch.left;
        res.window_probes += ch.probes;
        res.best.insert(res.best.end(), ch.best.begin(), ch.best.end());
    }
    res.value = canonical ? plain : total.value();
    detail::keep_best(res.best, opt.witness_limit);
    std::sort(res.best.begin(), res.best.end(), hit_before);
    return res;
}

// ---------------------------------------------------------------------------
// Direct and smoothed counts

struct Witness {
    std::array<u64, 4> p{};
    double form_value = 0.0;
    double distance = 0.0;
    int multiplicity = 0; ///< ordered tuples represented by this sorted quadruple
    std::array<RoughnessVerdict, 4> shifted{};
};

/// Number of distinct orderings of a sorted quadruple.
inline int ordering_count(const std::array<u64, 4>& p) {
    int m = 24;
    for (std::size_t i = 0; i < 4;) {
        std::size_t j = i;
        while (j < 4 && p[j] == p[i]) ++j;
        for (std::size_t f = 2; f <= j - i; ++f) m /= static_cast<int>(f);
        i = j;
    }
    return m;
}

struct SearchVolume {
    std::size_t primes = 0;
    std::size_t admissible = 0;
    std::uint64_t left_pairs = 0;
    std::uint64_t right_pairs = 0;
    std::uint64_t window_probes = 0;
};

struct DirectResult {
    double value = 0.0;
    std::uint64_t ordered_hits = 0;
    std::uint64_t solutions = 0; ///< distinct sorted quadruples
    std::vector<Witness> witnesses;
    SearchVolume volume;
};

struct DirectOptions {
    double radius = 0.0;
    bool require_rough = true;
    std::optional<double> N; ///< defaults to the instance's N
    Summation summation = Summation::compensated;
    unsigned threads = 1;
    std::size_t prime_cap = default_join_prime_cap;
    std::size_t witness_limit = 0;
};

/// sum of log p1 log p2 log p3 log p4 over |sum p_i^c - N| < radius, with all
/// p_i + 2 coprime to P(z) when require_rough is set.
inline DirectResult gamma_direct(const ExpSumContext& ctx, const DirectOptions& o) {
    require(ctx.size() > 0, "gamma_direct: empty prime range");
    std::vector<double> w(ctx.size());
    std::size_t admissible = 0;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        const bool ok = !o.require_rough || ctx.coprime()[i];
        w[i] = ok ? ctx.logs()[i] : 0.0;
        admissible += ok;
    }
    JoinOptions jo;
    jo.N = o.N.value_or(ctx.instance().N);
    jo.radius = o.radius;
    jo.summation = o.summation;
    jo.threads = o.threads;
    jo.prime_cap = o.prime_cap;
    jo.witness_limit = o.witness_limit;
    const auto jr = quadruple_join(ctx.powers(), {w, w, w, w}, jo, [](double) { return 1.0; });

    DirectResult r;
    r.value = jr.value;
    r.ordered_hits = jr.ordered_hits;
    r.solutions = jr.canonical_hits;
    r.volume = {ctx.size(), admissible, jr.left_pairs, jr.right_pairs, jr.window_probes};
    const double z = ctx.instance().z;
    for (const auto& h : jr.best) {
        Witness wt;
        for (int q = 0; q < 4; ++q) {
            wt.p[q] = ctx.primes()[h.idx[q]];
            const u64 n = wt.p[q] + 2;
            wt.shifted[q] = classify(n, factorize_trial(n), z);
        }
        wt.form_value = h.form_value;
        wt.distance = h.distance;
        wt.multiplicity = ordering_count(wt.p);
        r.witnesses.push_back(wt);
    }
    return r;
}

/// Per-prime multipliers of the smoothed counts.
enum class SmoothMode {
    unsieved,  ///< 1
    indicator, ///< [(p + 2, P(z)) = 1]: the smoothed count itself
    lower4,    ///< Lambda^- at all four positions
    upper4,    ///< Lambda^+ at all four positions
    mixed      ///< Lambda^- at one position, Lambda^+ at the other three
};

inline const char* to_string(SmoothMode m) {
    switch (m) {
    case SmoothMode::unsieved: return "unsieved";
    case SmoothMode::indicator: return "indicator";
    case SmoothMode::lower4: return "lower4";
    case SmoothMode::upper4: return "upper4";
    case SmoothMode::mixed: return "mixed";
    }
    return "?";
}

struct SmoothOptions {
    SmoothMode mode = SmoothMode::indicator;
    int mixed_position = 1; ///< 1..4, for SmoothMode::mixed
    bool require_rough = false;
    std::optional<double> N;
    Summation summation = Summation::compensated;
    unsigned threads = 1;
    std::size_t prime_cap = default_join_prime_cap;
};

/// Position weights log p times the mode's multiplier.
inline std::array<std::vector<double>, 4> smoothed_weights(const ExpSumContext& ctx, const SmoothOptions& o) {
    require(o.mixed_position >= 1 && o.mixed_position <= 4, "gamma_smoothed: mixed position must be 1..4");
    std::array<std::vector<double>, 4> w;
    for (int q = 0; q < 4; ++q) {
        w[q].resize(ctx.size());
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            double mult = 1.0;
            switch (o.mode) {
            case SmoothMode::unsieved: break;
            case SmoothMode::indicator: mult = ctx.coprime()[i]; break;
            case SmoothMode::lower4: mult = static_cast<double>(ctx.lambda_sums(WeightSign::minus)[i]); break;
            case SmoothMode::upper4: mult = static_cast<double>(ctx.lambda_sums(WeightSign::plus)[i]); break;
            case SmoothMode::mixed: {
                const auto s = (q + 1 == o.mixed_position) ? WeightSign::minus : WeightSign::plus;
                mult = static_cast<double>(ctx.lambda_sums(s)[i]);
                break;
            }
            }
            if (o.require_rough && !ctx.coprime()[i]) mult = 0.0;
            w[q][i] = mult * ctx.logs()[i];
        }
    }
    return w;
}

/// sum of theta(sum p_i^c - N) times the mode's multipliers and log p_i.
inline double gamma_smoothed(const ExpSumContext& ctx, const KernelSpec& kernel, const SmoothOptions& o) {
    require(ctx.size() > 0, "gamma_smoothed: empty prime range");
    JoinOptions jo;
    jo.N = o.N.value_or(ctx.instance().N);
    jo.radius = kernel.support();
    jo.summation = o.summation;
    jo.threads = o.threads;
    jo.prime_cap = o.prime_cap;
    return quadruple_join(ctx.powers(), smoothed_weights(ctx, o), jo,
                          [&](double y) { return theta_eval(kernel, y); })
        .value;
}

// ---------------------------------------------------------------------------
// Fourier side

struct FourierRegions {
    cplx near{};         ///< |t| < tau
    cplx intermediate{}; ///< tau <= |t| <= K
    cplx far{};          ///< K < |t| <= T
};

struct FourierResult {
    cplx value{};
    FourierRegions regions;
    double tail_bound = 0.0; ///< bound on the |t| > T part
    double step = 0.0;
    std::size_t points = 0;
    double max_frequency = 0.0; ///< max |sum p_i^c - N| over the prime range
};

struct FourierOptions {
    double T = 1000.0;
    double quad_step = -1.0; ///< <= 0 selects 1 / (4 (max_frequency + vartheta))
    std::optional<double> N;
    double tail_tolerance = -1.0; ///< throw when the tail bound exceeds this (if > 0)
    unsigned threads = 1;
    std::size_t max_points = 200'000'000;
};

/// int_{-T}^{T} Theta(t) e(-N t) L_minus(t) L_plus(t)^3 dt by the trapezoid
/// rule. The integrand is a finite sum of Theta(t) e(y t) over quadruple
/// offsets y, so the rule is exact up to truncation when the step is below
/// 1 / (max |y| + vartheta): aliased copies of theta then fall outside its
/// support.
inline FourierResult gamma1_fourier(const ExpSumContext& ctx, const KernelSpec& kernel, const FourierOptions& o) {
    require(o.T > 0.0, "gamma1_fourier: T must be positive");
    require(ctx.size() > 0, "gamma1_fourier: empty prime range");
    const auto& in = ctx.instance();
    const double N = o.N.value_or(in.N);
    const auto& pc = ctx.powers();
    const double lo = *std::min_element(pc.begin(), pc.end());
    const double hi = *std::max_element(pc.begin(), pc.end());
    FourierResult r;
    r.max_frequency = std::max(std::fabs(4.0 * hi - N), std::fabs(4.0 * lo - N));
    const double alias_free = 1.0 / (r.max_frequency + kernel.vartheta);
    const double step = o.quad_step > 0.0 ? o.quad_step : 0.25 * alias_free;
    require(step <= alias_free, "gamma1_fourier: quad_step must be <= 1 / (max |sum p^c - N| + vartheta)");
    const auto M = static_cast<std::size_t>(std::ceil(o.T / step));
    if (2 * M + 1 > o.max_points)
        throw resource_cap_error("gamma1_fourier: " + std::to_string(2 * M + 1) + " quadrature points exceed the cap");
    const double h = o.T / static_cast<double>(M);
    r.step = h;
    r.points = 2 * M + 1;

    const auto& cm = ctx.coefficients(WeightSign::minus);
    const auto& cp = ctx.coefficients(WeightSign::plus);
    const double tau = in.tau, K = in.K;

    // Grid index m runs over [-M, M]; chunks of consecutive m with phases
    // recomputed at each chunk start.
    constexpr std::size_t chunk = 4096;
    const std::size_t total = 2 * M + 1;
    const std::size_t chunks = (total + chunk - 1) / chunk;
    std::vector<std::array<compensated_sum<cplx>, 3>> parts(chunks);
    parallel_chunks(chunks, o.threads, [&](std::size_t c) {
        const std::size_t q0 = c * chunk;
        const std::size_t len = std::min(chunk, total - q0);
        const double t0 = h * (static_cast<double>(q0) - static_cast<double>(M));
        std::vector<cplx> rot(pc.size()), stp(pc.size());
        for (std::size_t i = 0; i < pc.size(); ++i) {
            rot[i] = unit_phase(pc[i] * t0);
            stp[i] = unit_phase(pc[i] * h);
        }
        cplx shift = unit_phase(-N * t0);
        const cplx shift_step = unit_phase(-N * h);
        for (std::size_t q = 0; q < len; ++q) {
            const std::size_t m = q0 + q;
            const double t = h * (static_cast<double>(m) - static_cast<double>(M));
            cplx l1 = 0.0, l2 = 0.0;
            for (std::size_t i = 0; i < pc.size(); ++i) {
                l1 += cm[i] * rot[i];
                l2 += cp[i] * rot[i];
                rot[i] *= stp[i];
            }
            const double wgt = (m == 0 || m + 1 == total) ? 0.5 * h : h;
            const cplx val = wgt * theta_fourier(kernel, t) * shift * l1 * l2 * l2 * l2;
            shift *= shift_step;
            const double at = std::fabs(t);
            parts[c][at < tau ? 0 : (at <= K ? 1 : 2)] += val;
        }
    });
    compensated_sum<cplx> a, b, f;
    for (auto& p : parts) {
        a += p[0].value();
        b += p[1].value();
        f += p[2].value();
    }
    r.regions = {a.value(), b.value(), f.value()};
    r.value = r.regions.near + r.regions.intermediate + r.regions.far;
    const double bm = L_trivial_bound(ctx, WeightSign::minus);
    const double bp = L_trivial_bound(ctx, WeightSign::plus);
    r.tail_bound = kernel_tail_bound(kernel, o.T) * bm * bp * bp * bp;
    if (o.tail_tolerance > 0.0 && r.tail_bound > o.tail_tolerance)
        throw convergence_error("gamma1_fourier: tail bound " + std::to_string(r.tail_bound) +
                                    " exceeds the tolerance; increase the kernel order k or T",
                                r.tail_bound);
    return r;
}

// ---------------------------------------------------------------------------
// Singular integral

/// Window against which the 4-fold density is integrated.
enum class BWindow { kernel, indicator };

struct BResult {
    double value = 0.0;
    double coarse_value = 0.0; ///< same computation at twice the grid step
    double error_estimate = 0.0;
    double step = 0.0;
    std::size_t grid_points = 0;
    double normalised = 0.0; ///< value / (vartheta X^{4-c})
};

struct BOptions {
    BWindow window = BWindow::kernel;
    double step = -1.0; ///< <= 0 selects vartheta / 16
    std::size_t max_grid = std::size_t{1} << 24;
};

namespace detail {

/// Linear convolution of two real sequences through FFTW.
inline std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t out = a.size() + b.size() - 1;
    std::size_t L = 1;
    while (L < out) L <<= 1;
    const std::size_t bins = L / 2 + 1;
    double* x = fftw_alloc_real(L);
    double* y = fftw_alloc_real(L);
    fftw_complex* X = fftw_alloc_complex(bins);
    fftw_complex* Y = fftw_alloc_complex(bins);
    std::fill(x, x + L, 0.0);
    std::fill(y, y + L, 0.0);
    std::copy(a.begin(), a.end(), x);
    std::copy(b.begin(), b.end(), y);
    fftw_plan px = fftw_plan_dft_r2c_1d(static_cast<int>(L), x, X, FFTW_ESTIMATE);
    fftw_plan py = fftw_plan_dft_r2c_1d(static_cast<int>(L), y, Y, FFTW_ESTIMATE);
    fftw_execute(px);
    fftw_execute(py);
    for (std::size_t k = 0; k < bins; ++k) {
        const double re = X[k][0] * Y[k][0] - X[k][1] * Y[k][1];
        const double im = X[k][0] * Y[k][1] + X[k][1] * Y[k][0];
        X[k][0] = re;
        X[k][1] = im;
    }
    fftw_plan pb = fftw_plan_dft_c2r_1d(static_cast<int>(L), X, x, FFTW_ESTIMATE);
    fftw_execute(pb);
    std::vector<double> res(x, x + out);
    for (double& v : res) v /= static_cast<double>(L);
    fftw_destroy_plan(px);
    fftw_destroy_plan(py);
    fftw_destroy_plan(pb);
    fftw_free(x);
    fftw_free(y);
    fftw_free(X);
    fftw_free(Y);
    return res;
}

/// One evaluation of B with n cells on [(X/2)^c, X^c].
template <typename W>
double B_on_grid(double X, double c, double N, double vartheta, std::size_t n, W&& window,
                 const std::vector<double>& kinks) {
    const double a = std::pow(X / 2.0, c);
    const double b = std::pow(X, c);
    const double h = (b - a) / static_cast<double>(n);
    // Exact cell masses: the antiderivative of u^{1/c - 1} / c is u^{1/c}.
    std::vector<double> mass(n);
    double prev = X / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u1 = (i + 1 == n) ? b : a + h * static_cast<double>(i + 1);
        const double cur = (i + 1 == n) ? X : std::pow(u1, 1.0 / c);
        mass[i] = cur - prev;
        prev = cur;
    }
    const auto rho2 = fft_convolve(mass, mass); // masses at 2a + (j + 1) h
    // rho4 mass at q sits at 4a + (q + 2) h; density is mass / h.
    const double first = (N - vartheta - 4.0 * a) / h - 2.0;
    const double last = (N + vartheta - 4.0 * a) / h - 2.0;
    const long q_max = static_cast<long>(4 * n - 4);
    const long q0 = std::max<long>(0, static_cast<long>(std::floor(first)) - 1);
    const long q1 = std::min<long>(q_max, static_cast<long>(std::ceil(last)) + 1);
    if (q0 > q1) return 0.0;
    const long r2 = static_cast<long>(rho2.size());
    auto rho4 = [&](long q) -> double {
        if (q < 0 || q > q_max) return 0.0;
        long double acc = 0.0L;
        const long j0 = std::max<long>(0, q - (r2 - 1));
        const long j1 = std::min<long>(q, r2 - 1);
        for (long j = j0; j <= j1; ++j) acc += static_cast<long double>(rho2[j]) * rho2[q - j];
        return static_cast<double>(acc) / h;
    };
    std::vector<double> dens;
    for (long q = q0; q <= q1; ++q) dens.push_back(std::max(0.0, rho4(q)));
    auto pos = [&](long q) { return 4.0 * a + (static_cast<double>(q) + 2.0) * h; };
    auto interp = [&](double s) {
        const double x = (s - 4.0 * a) / h - 2.0;
        const long q = static_cast<long>(std::floor(x));
        if (q < q0 || q >= q1) return 0.0;
        const double f = x - static_cast<double>(q);
        return dens[q - q0] * (1.0 - f) + dens[q - q0 + 1] * f;
    };
    // Integrate window(s - N) * density(s) over [N - vartheta, N + vartheta],
    // split at grid nodes and at the window's kinks.
    std::vector<double> cuts{N - vartheta, N + vartheta};
    for (double k : kinks) cuts.push_back(N + k);
    for (long q = q0; q <= q1; ++q) {
        const double s = pos(q);
        if (s > N - vartheta && s < N + vartheta) cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end());
    long double acc = 0.0L;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        acc += gauss_legendre5([&](double s) { return window(s - N) * interp(s); }, cuts[i], cuts[i + 1]);
    }
    return static_cast<double>(acc);
}

} // namespace detail

/// B = int over [X/2, X]^4 of window(y1^c + ... + y4^c - N) dy with the
/// kernel theta of half width vartheta or the indicator of [-vartheta, vartheta].
inline BResult B_integral(double X, double c, double N, const KernelSpec& kernel, const BOptions& o = {}) {
    require(X > 0.0 && c >= 1.0, "B_integral: need X > 0 and c >= 1");
    const double vt = kernel.vartheta;
    const double a = std::pow(X / 2.0, c), b = std::pow(X, c);
    BResult r;
    const double target = o.step > 0.0 ? o.step : vt / 16.0;
    require(target <= vt / 16.0, "B_integral: grid step must be <= vartheta / 16");
    auto n = static_cast<std::size_t>(std::ceil((b - a) / target));
    if (n % 2) ++n;
    if (n > o.max_grid)
        throw resource_cap_error("B_integral: grid of " + std::to_string(n) + " points exceeds the cap");
    r.step = (b - a) / static_cast<double>(n);
    r.grid_points = n;
    const double norm = vt * std::pow(X, 4.0 - c);
    if (N < 4.0 * a - vt || N > 4.0 * b + vt) return r;
    auto run = [&](std::size_t cells) {
        if (o.window == BWindow::indicator)
            return detail::B_on_grid(X, c, N, vt, cells, [](double) { return 1.0; }, {});
        return detail::B_on_grid(X, c, N, vt, cells, [&](double y) { return theta_eval(kernel, y); },
                                 {-kernel.plateau(), kernel.plateau()});
    };
    r.value = run(n);
    r.coarse_value = run(n / 2);
    r.error_estimate = std::fabs(r.value - r.coarse_value);
    r.normalised = r.value / norm;
    return r;
}

// ---------------------------------------------------------------------------
// Prediction and pipeline

struct Prediction {
    double coefficient = 0.0;
    double W = 0.0;
    double value = 0.0;
    bool negative = false;
};

/// W = 4 G+^3 (G- - coefficient G+), prediction B W.
inline Prediction main_prediction(double B, double g_plus, double g_minus, double coefficient) {
    require(coefficient > 0.0 && coefficient < 1.0, "main_prediction: coefficient must lie in (0, 1)");
    Prediction p;
    p.coefficient = coefficient;
    p.W = 4.0 * g_plus * g_plus * g_plus * (g_minus - coefficient * g_plus);
    p.value = B * p.W;
    p.negative = p.value < 0.0;
    return p;
}

struct WitnessSearch {
    std::vector<Witness> witnesses;
    std::uint64_t solutions = 0;
    SearchVolume volume;
};

/// Sorted prime quadruples with |sum p_i^c - N| < vartheta and every p_i + 2
/// coprime to P(z), best `limit` by (distance, primes).
inline WitnessSearch find_witnesses(const ExpSumContext& ctx, std::size_t limit = default_witness_limit,
                                    unsigned threads = 1, std::size_t prime_cap = default_join_prime_cap) {
    WitnessSearch s;
    const double vt = ctx.instance().vartheta;
    if (vt <= 0.0 || ctx.size() == 0) {
        s.volume.primes = ctx.size();
        return s;
    }
    DirectOptions o;
    o.radius = vt;
    o.require_rough = true;
    o.threads = threads;
    o.prime_cap = prime_cap;
    o.witness_limit = limit;
    auto r = gamma_direct(ctx, o);
    s.witnesses = std::move(r.witnesses);
    s.solutions = r.solutions;
    s.volume = r.volume;
    return s;
}

struct GammaReport {
    double gamma_direct = 0.0;
    double gamma_smoothed = 0.0; ///< indicator mode
    double gamma1 = 0.0;         ///< mixed(1)
    double gamma5 = 0.0;         ///< upper4
    double gamma0 = 0.0;         ///< 4 gamma1 - 3 gamma5
    std::optional<FourierResult> fourier;
    double B = 0.0;
    double B_error = 0.0;
    double G_plus = 0.0;
    double G_minus = 0.0;
    Prediction prediction;
    WitnessSearch search;
};

struct PipelineOptions {
    int kernel_order = default_kernel_order;
    double coefficient = 0.75;
    std::size_t witness_limit = default_witness_limit;
    bool fourier = false;
    FourierOptions fourier_options;
    unsigned threads = 1;
    std::size_t prime_cap = default_join_prime_cap;
    bool compute_B = true;
};

inline GammaReport gamma_pipeline(const ExpSumContext& ctx, const PipelineOptions& o) {
    const auto& in = ctx.instance();
    const auto kernel = KernelSpec::make(in.vartheta, o.kernel_order);
    GammaReport g;
    DirectOptions d;
    d.radius = in.vartheta;
    d.threads = o.threads;
    d.prime_cap = o.prime_cap;
    d.witness_limit = o.witness_limit;
    const auto dr = gamma_direct(ctx, d);
    g.gamma_direct = dr.value;
    g.search = {dr.witnesses, dr.solutions, dr.volume};
    SmoothOptions s;
    s.threads = o.threads;
    s.prime_cap = o.prime_cap;
    s.mode = SmoothMode::indicator;
    g.gamma_smoothed = gamma_smoothed(ctx, kernel, s);
    s.mode = SmoothMode::mixed;
    g.gamma1 = gamma_smoothed(ctx, kernel, s);
    s.mode = SmoothMode::upper4;
    g.gamma5 = gamma_smoothed(ctx, kernel, s);
    g.gamma0 = 4.0 * g.gamma1 - 3.0 * g.gamma5;
    if (o.fourier) {
        auto fo = o.fourier_options;
        fo.threads = o.threads;
        g.fourier = gamma1_fourier(ctx, kernel, fo);
    }
    g.G_plus = ctx.g(WeightSign::plus);
    g.G_minus = ctx.g(WeightSign::minus);
    if (o.compute_B) {
        const auto b = B_integral(in.X, in.c, in.N, kernel);
        g.B = b.value;
        g.B_error = b.error_estimate;
    }
    g.prediction = main_prediction(g.B, g.G_plus, g.G_minus, o.coefficient);
    return g;
}

} // namespace pdi
