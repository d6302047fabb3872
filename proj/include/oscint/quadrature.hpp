#pragma once

#include "oscint/functions.hpp"

namespace oscint {

struct QuadResult {
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    long panels_used = 0;
    bool converged = false;
};

struct QuadOptions {
    long max_panels = 200000;  // exceeded -> converged=false, never silent inaccuracy
};

// Integral of U(p) e^{i omega psi(p)} over the amplitude interval.
// The panel next to the singular endpoint is computed under s = (p-p1)^mu,
// which removes the singularity exactly; the interval is split at the
// stationary point; panel widths are capped at pi / (omega max|psi'|).
QuadResult oscillatory_integral(const Amplitude& a, const Phase& ph, double omega, double tol,
                                const QuadOptions& opt = {});

// Same integral for a frequency datum over the whole line.  The line is
// truncated to [-P, P]: P is chosen from the datum's decay metadata so the
// neglected tail stays under tol/2, taking the smaller of the static
// majorant radius and a per-band stationary-point-free estimate valid for
// the given omega.
QuadResult improper_oscillatory_integral(const InitialDatum& d, const Phase& ph, double omega,
                                         double tol, const QuadOptions& opt = {});

// Norm estimators used by every certificate.  sup_norm is inflated by
// (1 + 1e-6) and never below the sampled maximum; min_abs mirrors it with a
// (1 - 1e-6) deflation.  l1_norm integrates |g| adaptively to 1e-8 relative.
double sup_norm(const cplx_fn& g, Interval it);
double sup_norm(const real_fn& g, Interval it);
double l1_norm(const cplx_fn& g, Interval it);
double min_abs(const real_fn& g, Interval it);

// Interval norms of a regular factor, preferring declared analytic values
// when `whole` says the requested interval is the factor's native one.
double factor_sup(const RegularFactor& rf, Interval it, bool whole);
double factor_l1_deriv(const RegularFactor& rf, Interval it, bool whole);

} // namespace oscint
