#pragma once

#include "oscint/quadrature.hpp"

namespace oscint {

// One term of a stationary-phase/endpoint expansion: the modulus, the
// constant unit phase factor, and the omega-dependent factor e^{i omega c}.
struct LeadingTerm {
    double coefficient_modulus = 0.0;
    cplx phase_constant{1.0, 0.0};   // unit modulus
    double phase_omega_coeff = 0.0;  // full factor: phase_constant * e^{i omega *this}
    double exponent = 0.0;           // decay exponent in omega
};

// Leading term at a stationary point sitting on the singular endpoint
// (p0 = p1): modulus (rho^{mu/rho}/rho) Gamma(mu/rho) |u~(p1)| / psi~(p1)^{mu/rho}.
LeadingTerm leading_term_interior(const Amplitude& a, const Phase& ph);

// Endpoint terms when psi' does not vanish: the singular endpoint gives
// Gamma(mu) |u~(p1)| / psi'(p1)^mu at omega^{-mu}, the far endpoint
// |U(p2)|/|psi'(p2)| at omega^{-1}.
std::pair<LeadingTerm, LeadingTerm> leading_term_nostat(const Amplitude& a, const Phase& ph);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;  // in log10-log10 coordinates
    double r_squared = 0.0;
    double x_min = 0.0, x_max = 0.0;
};

// Least-squares line through (log x, log y).  Zero/negative y values are
// dropped; fewer than 2 surviving samples is a parameter error.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& samples);

// Keeps the maximal y per decade of x; oscillatory moduli pass near zero, so
// slopes are fitted on this upper envelope.
std::vector<std::pair<double, double>> decade_envelope(
    const std::vector<std::pair<double, double>>& samples);

// |I(omega)| / (modulus * omega^exponent) per omega; approaching 1 certifies
// the optimality of the decay rate empirically.
std::vector<std::pair<double, double>> optimality_ratio(const Amplitude& a, const Phase& ph,
                                                        const std::vector<double>& omegas,
                                                        double tol = 1e-8,
                                                        const QuadOptions& opt = {});

} // namespace oscint
