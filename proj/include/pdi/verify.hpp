#pragma once

/// @file verify.hpp
/// @brief Invariant suites run by `pdi verify`. Each check reports pass/fail
/// plus the numbers it was judged on.

#include <random>
#include <string>
#include <vector>

#include "pdi/expsum.hpp"
#include "pdi/gamma.hpp"
#include "pdi/io.hpp"
#include "pdi/kernel.hpp"
#include "pdi/params.hpp"
#include "pdi/sieve.hpp"

namespace pdi {

struct CheckResult {
    std::string name;
    bool passed = false;
    json detail;
};

/// (lower, indicator, upper) sieve values of one integer.
struct SieveTriple {
    long lo = 0, ind = 0, hi = 0;
};

/// Triples for m = 1..count at level (D, z).
inline std::vector<SieveTriple> sieve_triples(double D, double z, u64 count) {
    const auto plus = build_rosser(D, z, SieveSign::plus);
    const auto minus = build_rosser(D, z, SieveSign::minus);
    const PrimeTable table(std::max<u64>(count, 2));
    std::vector<SieveTriple> out;
    for (u64 m = 1; m <= count; ++m) {
        const auto s = sifted_part(table.factorize(m), z);
        out.push_back({lambda_sum(minus, s), s.empty() ? 1 : 0, lambda_sum(plus, s)});
    }
    return out;
}

/// ind1 ind2 ind3 ind4 >= vector_sieve_bound(lo, hi) for one quadruple.
inline bool vector_sieve_holds(const SieveTriple& a, const SieveTriple& b, const SieveTriple& c, const SieveTriple& d) {
    const std::array<double, 4> lo{double(a.lo), double(b.lo), double(c.lo), double(d.lo)};
    const std::array<double, 4> hi{double(a.hi), double(b.hi), double(c.hi), double(d.hi)};
    return double(a.ind * b.ind * c.ind * d.ind) >= vector_sieve_bound(lo, hi);
}

struct VectorSieveReport {
    std::uint64_t random_checked = 0;
    std::uint64_t random_violations = 0;
    std::uint64_t pool_checked = 0;
    std::uint64_t pool_violations = 0;
    std::size_t distinct_triples = 0;
};

/// `samples` random quadruples drawn from the triples of m <= count, and all
/// ordered quadruples from a pool of up to `pool` distinct triples.
inline VectorSieveReport vector_sieve_trial(double D, double z, u64 count, std::uint64_t samples, std::size_t pool,
                                            std::uint64_t seed) {
    const auto triples = sieve_triples(D, z, count);
    VectorSieveReport r;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, triples.size() - 1);
    for (std::uint64_t s = 0; s < samples; ++s) {
        ++r.random_checked;
        if (!vector_sieve_holds(triples[pick(rng)], triples[pick(rng)], triples[pick(rng)], triples[pick(rng)]))
            ++r.random_violations;
    }
    std::vector<SieveTriple> distinct;
    for (const auto& t : triples) {
        bool seen = false;
        for (const auto& u : distinct) seen |= (u.lo == t.lo && u.ind == t.ind && u.hi == t.hi);
        if (!seen) distinct.push_back(t);
    }
    r.distinct_triples = distinct.size();
    // Pad the pool with further (non-distinct) values in m order up to `pool`.
    std::vector<SieveTriple> vals = distinct;
    for (std::size_t i = 0; vals.size() < pool && i < triples.size(); ++i) vals.push_back(triples[i]);
    if (vals.size() > pool) vals.resize(pool);
    for (const auto& a : vals)
        for (const auto& b : vals)
            for (const auto& c : vals)
                for (const auto& d : vals) {
                    ++r.pool_checked;
                    if (!vector_sieve_holds(a, b, c, d)) ++r.pool_violations;
                }
    return r;
}

inline std::vector<CheckResult> verify_sieve(std::uint64_t seed = 1) {
    std::vector<CheckResult> out;
    {
        json rows = json::array();
        bool ok = true;
        for (auto [D, z] : {std::pair{50.0, 10.0}, {100.0, 10.0}, {500.0, 20.0}, {1000.0, 30.0}}) {
            const u64 v = sandwich_check(D, z, 100000);
            ok &= v == 0;
            rows.push_back({{"D", D}, {"z", z}, {"m_max", 100000}, {"violations", v}});
        }
        out.push_back({"sandwich", ok, rows});
    }
    {
        const auto r = vector_sieve_trial(1000.0, 30.0, 100000, 100000, 50, seed);
        out.push_back({"vector_sieve", r.random_violations == 0 && r.pool_violations == 0,
                       {{"random_checked", r.random_checked},
                        {"random_violations", r.random_violations},
                        {"pool_checked", r.pool_checked},
                        {"pool_violations", r.pool_violations}}});
    }
    {
        json rows = json::array();
        bool ok = true;
        for (auto [D, z] : {std::pair{100.0, 7.0}, {1000.0, 20.0}, {1e4, 40.0}}) {
            const auto g = g_bounds_check(D, z);
            ok &= g.chain_holds;
            rows.push_back({{"D", D}, {"z", z}, {"G_minus", g.G_minus}, {"curly_F", g.curly_F}, {"G_plus", g.G_plus}});
        }
        out.push_back({"g_chain", ok, rows});
    }
    {
        const auto two_thirds = sieve_functions(default_s);
        const double obj = two_thirds.f - 2.0 / 3.0 * two_thirds.F;
        const auto scan = scan_sieve_quality(0.75, 0.001);
        out.push_back({"sieve_functions", obj > 1e-5 && scan.all_negative,
                       {{"objective_two_thirds_at_2.95", obj}, {"three_quarters_all_negative", scan.all_negative}}});
    }
    return out;
}

inline std::vector<CheckResult> verify_kernel() {
    std::vector<CheckResult> out;
    const auto xs = log_grid(1e-3, 1e5, 10000);
    json rows = json::array();
    bool ok = true;
    for (auto [vt, k] : {std::pair{0.1, 3}, {0.01, 8}, {0.5, 1}}) {
        const auto spec = KernelSpec::make(vt, k);
        const auto r = verify_kernel_bounds(spec, xs);
        ok &= r.violations == 0;
        rows.push_back({{"vartheta", vt}, {"k", k}, {"points", r.points}, {"violations", r.violations}});
    }
    out.push_back({"fourier_bounds", ok, rows});

    bool shape = true;
    for (auto [vt, k] : {std::pair{0.1, 3}, {0.01, 8}, {0.5, 1}}) {
        const auto spec = KernelSpec::make(vt, k);
        for (int i = 0; i <= 100; ++i) {
            const double y = spec.plateau() * i / 100.0;
            shape &= theta_eval(spec, y) == 1.0 && theta_eval(spec, -y) == 1.0;
            const double w = spec.support() * (1.0 + i / 100.0);
            shape &= theta_eval(spec, w) == 0.0 && theta_eval(spec, -w) == 0.0;
        }
    }
    out.push_back({"plateau_and_support", shape, json::object()});

    const auto spec = KernelSpec::make(0.5, 2);
    const auto rt = fourier_roundtrip_error(spec, 1000.0, 1.0 / 96.0);
    out.push_back({"roundtrip", rt.total() <= 1e-4,
                   {{"max_quadrature_error", rt.max_quadrature_error}, {"tail_bound", rt.tail_bound}}});
    return out;
}

inline std::vector<CheckResult> verify_expsum() {
    std::vector<CheckResult> out;
    const auto ctx = ExpSumContext::build(ProblemInstance::desk(1.05, 1000.0, 0.05, 7.0, 300.0));
    double sym = 0.0, routes = 0.0, over = 0.0;
    for (auto s : {WeightSign::plus, WeightSign::minus, WeightSign::unsieved}) {
        const double bound = L_trivial_bound(ctx, s);
        for (double t : {1e-4, 0.0123, 0.5, 3.7}) {
            const cplx a = L_sum(ctx, s, t);
            sym = std::max(sym, std::abs(L_sum(ctx, s, -t) - std::conj(a)) / std::max(1.0, std::abs(a)));
            routes = std::max(routes, std::abs(L_sum_by_residue(ctx, s, t) - a) / std::max(1.0, std::abs(a)));
            over = std::max(over, std::abs(a) - bound);
        }
    }
    out.push_back({"conjugate_symmetry", sym <= 1e-12, {{"max_relative", sym}}});
    out.push_back({"residue_route", routes <= 1e-9, {{"max_relative", routes}}});
    out.push_back({"triangle_bound", over <= 1e-9, {{"max_excess", over}}});

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lx(1.0, 5.0), la(-4.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double X = std::pow(10.0, lx(rng));
        const double alpha = std::pow(10.0, la(rng));
        const cplx exact = I_closed_form_c1(alpha, X);
        worst = std::max(worst, std::abs(I_integral(alpha, X, 1.0) - exact) / std::abs(exact));
    }
    out.push_back({"integral_closed_form", worst <= 1e-8, {{"max_relative", worst}}});

    std::vector<double> alphas;
    for (double a = std::pow(1e4, -1.005) * 1e3; a < 1.0; a *= 2) alphas.push_back(a);
    const auto d = decay_check(1e4, 1.005, alphas);
    out.push_back({"integral_decay", d.violations == 0, {{"max_ratio", d.max_ratio}, {"constant", d.constant}}});
    return out;
}

inline std::vector<CheckResult> verify_gamma() {
    std::vector<CheckResult> out;
    // Join against a literal nested loop on a small instance.
    {
        const double c = 1.0137, N = 3.0 * std::pow(90.0, c);
        const auto ctx = ExpSumContext::build(ProblemInstance::desk(c, 90.0, 0.5, 5.0, 100.0, N), sieve_primes(30, 90));
        DirectOptions o;
        o.radius = 5.0;
        o.require_rough = false;
        o.summation = Summation::canonical;
        const double join = gamma_direct(ctx, o).value;
        const auto& pc = ctx.powers();
        const auto& w = ctx.logs();
        double loop = 0.0;
        for (std::size_t i = 0; i < pc.size(); ++i)
            for (std::size_t j = 0; j < pc.size(); ++j)
                for (std::size_t k = 0; k < pc.size(); ++k)
                    for (std::size_t l = 0; l < pc.size(); ++l) {
                        const double y = (pc[i] + pc[j]) + (pc[k] + pc[l]) - N;
                        if (std::fabs(y) < 5.0) loop += (w[i] * w[j]) * (w[k] * w[l]) * 1.0;
                    }
        out.push_back({"join_vs_loop", join == loop, {{"join", join}, {"loop", loop}}});
    }
    const double c = 1.05, vt = 0.2, N = 3 * std::pow(400.0, c);
    const auto ctx = ExpSumContext::build(ProblemInstance::desk(c, 400.0, vt, 7.0, 200.0, N));
    const auto kernel = KernelSpec::make(vt, 8);
    DirectOptions d;
    d.radius = 0.75 * vt;
    const double inner = gamma_direct(ctx, d).value;
    d.radius = vt;
    const double outer = gamma_direct(ctx, d).value;
    SmoothOptions s;
    const double smooth = gamma_smoothed(ctx, kernel, s);
    out.push_back({"theta_sandwich", inner <= smooth * (1 + 1e-12) && smooth <= outer * (1 + 1e-12),
                   {{"inner", inner}, {"smoothed", smooth}, {"outer", outer}}});
    s.mode = SmoothMode::upper4;
    const double g5 = gamma_smoothed(ctx, kernel, s);
    s.mode = SmoothMode::mixed;
    double m[4];
    double spread = 0.0;
    for (int i = 0; i < 4; ++i) {
        s.mixed_position = i + 1;
        m[i] = gamma_smoothed(ctx, kernel, s);
        spread = std::max(spread, std::fabs(m[i] - m[0]) / std::max(1.0, std::fabs(m[0])));
    }
    out.push_back({"mixed_symmetry", spread <= 1e-10, {{"max_relative_spread", spread}}});
    const double g0 = m[0] + m[1] + m[2] + m[3] - 3 * g5;
    out.push_back({"decomposition", smooth >= g0 - 1e-10 * std::max({1.0, std::fabs(smooth), std::fabs(g5)}),
                   {{"smoothed", smooth}, {"gamma0", g0}}});
    {
        // Target on a quadruple of 5-rough shifted primes so the count is nonzero.
        const double c2 = 1.1, N2 = std::pow(59.0, c2) + std::pow(71.0, c2) + 2.0 * std::pow(89.0, c2);
        const auto toy = ExpSumContext::build(ProblemInstance::desk(c2, 100.0, 0.05, 5.0, 100.0, N2), sieve_primes(50, 100));
        const auto k8 = KernelSpec::make(0.05, 8);
        SmoothOptions mo;
        mo.mode = SmoothMode::mixed;
        const double direct = gamma_smoothed(toy, k8, mo);
        FourierOptions fo;
        fo.T = 1000.0;
        const auto f = gamma1_fourier(toy, k8, fo);
        const double rel = std::fabs(f.value.real() - direct) / std::fabs(direct);
        out.push_back({"fourier_inversion", direct > 0.0 && rel <= 1e-3,
                       {{"fourier", f.value.real()}, {"direct", direct}, {"relative", rel}}});
    }
    return out;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed = 1) {
    std::vector<CheckResult> all;
    auto add = [&](std::vector<CheckResult> v) { all.insert(all.end(), v.begin(), v.end()); };
    if (suite == "sieve" || suite == "all") add(verify_sieve(seed));
    if (suite == "kernel" || suite == "all") add(verify_kernel());
    if (suite == "expsum" || suite == "all") add(verify_expsum());
    if (suite == "gamma" || suite == "all") add(verify_gamma());
    require(!all.empty(), "verify: unknown suite '" + suite + "'");
    return all;
}

} // namespace pdi
