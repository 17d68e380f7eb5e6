#pragma once

#include <cmath>
#include <string>

#include "pdi/error.hpp"
#include "pdi/params.hpp"

namespace pdi {

/// The numbers one computation runs on. Either taken verbatim from
/// TheoremParams (asymptotic regime) or with any of vartheta, z, D, tau, K
/// overridden for desk-scale runs, which are labelled as such.
struct ProblemInstance {
    double c = 1.0;
    double X = 0.0; ///< primes range over (X/2, X]
    double N = 0.0;
    double A = default_A;
    double vartheta = 0.0;
    double z = 0.0;
    double D = 0.0;
    double tau = 0.0;
    double K = 0.0;
    double eta = eps0 / 9.0;
    bool asymptotic_regime = true;

    static ProblemInstance from_params(const TheoremParams& p) {
        ProblemInstance in;
        in.c = p.c;
        in.X = p.X;
        in.N = p.N;
        in.A = p.A;
        in.vartheta = p.vartheta;
        in.z = p.z;
        in.D = p.D;
        in.tau = p.tau;
        in.K = p.K;
        in.eta = p.eta;
        return in;
    }

    /// Desk-scale instance: asymptotic formulas for anything not overridden,
    /// N = 3 X^c unless given.
    static ProblemInstance desk(double c, double X, double vartheta, double z, double D, double N = -1.0) {
        require(c >= 1.0, "ProblemInstance: c must be >= 1");
        require(X >= 16.0, "ProblemInstance: X must be >= 16");
        if (N <= 0.0) N = 3.0 * std::pow(X, c);
        auto in = from_params(derive_params(c, N));
        in.X = X;
        in.N = N;
        in.vartheta = vartheta;
        in.z = z;
        in.D = D;
        in.K = std::log(X) * std::log(X) / vartheta;
        in.asymptotic_regime = false;
        return in;
    }

    const char* regime() const { return asymptotic_regime ? "asymptotic" : "desk-scale override"; }
};

} // namespace pdi
