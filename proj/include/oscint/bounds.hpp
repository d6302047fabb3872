#pragma once

#include "oscint/quadrature.hpp"

#include <array>
#include <functional>

namespace oscint {

enum class TheoremTag {
    T3_3,
    T3_6,
    T3_8,
    T3_12,
    T4_3_in,
    T4_3_out,
    T4_4,
    T4_7,
    T4_8,
    T5_4_in,
    T5_4_out,
};

std::string to_string(TheoremTag tag);

// A named constant, its decay exponent, and where the bound holds.
struct BoundCertificate {
    double constant = 0.0;
    double decay_exponent = 0.0;
    TheoremTag theorem_tag = TheoremTag::T3_3;
    std::string regime;
    std::map<std::string, double> ingredients;
};

std::string certificate_to_json(const BoundCertificate& cert);

// Interior stationary point: C = (3/mu)||u~|| + (8||u~|| + 2||u~'||)/m with
// m = min |psi~| on the interval; sharper form when mu = 1.  Decays like
// omega^{-mu/rho}.
BoundCertificate vdc_interior_constant(const Amplitude& a, const Phase& ph);

// Stationary point outside the interval: (2/mu)||u~|| + (4||u~|| + ||u~'||)/m,
// never larger than the interior constant.
BoundCertificate vdc_exterior_constant(const Amplitude& a, const Phase& ph);

// Uniform in the position of the stationary point; the interior constant.
BoundCertificate vdc_combined_constant(const Amplitude& a, const Phase& ph);

// No stationary point on the interval: (1/mu)||u~|| + (4||u~|| + ||u~'||)/min|psi'|,
// decay omega^{-mu}.
BoundCertificate nostationary_constant(const Amplitude& a, const Phase& ph);

// Band-datum solution bounds inside the cone spanned by [pt1, pt2] (decay
// t^{-mu/2}) and in its complement (decay t^{-mu}).
std::pair<BoundCertificate, BoundCertificate> cone_constants_C1(const InitialDatum& d,
                                                                const Symbol& s,
                                                                Interval tilde);

// Bounds in a narrow cone around the singular direction: pair (t^{-mu/2}, t^{-1}).
std::pair<BoundCertificate, BoundCertificate> singular_direction_constants(
    const InitialDatum& d, const Symbol& s, double epsilon,
    std::optional<double> eta_override = std::nullopt);

// Bounds in a cone away from the singular direction: triple
// (t^{-1/2}, t^{-mu}, t^{-1}).
std::array<BoundCertificate, 3> offaxis_constants(const InitialDatum& d, const Symbol& s,
                                                  Interval tilde);

struct LimitedGrowthConstants {
    BoundCertificate inside_stationary;   // t^{-mu/2}
    BoundCertificate inside_series;       // t^{-1/2}
    BoundCertificate outside_stationary;  // t^{-mu}
    BoundCertificate outside_series;      // t^{-1}
};

// Bounded-f' symbols: constants of the asymptotic-causality bounds inside
// and outside the symbol's limiting cone.
LimitedGrowthConstants limited_growth_constants(const InitialDatum& d, const Symbol& s);

struct VerificationSample {
    double parameter = 0.0;
    double truth_abs = 0.0;
    double bound_value = 0.0;
};

struct VerificationReport {
    std::vector<VerificationSample> samples;
    double max_ratio = 0.0;
    bool all_dominated = false;
    double quadrature_slack = 1e-4;
    std::vector<double> excluded;  // parameters where the truth did not converge
};

std::string report_to_json(const VerificationReport& rep);

// Truth evaluator: |truth(x)| against sum of constant * x^exponent over the
// certificates.  Returning nullopt flags the point as non-converged; it is
// excluded and reported.
using TruthFn = std::function<std::optional<cplx>(double)>;

VerificationReport verify_bound(const std::vector<BoundCertificate>& certs, const TruthFn& truth,
                                const std::vector<double>& grid, double slack = 1e-4,
                                int workers = 1);

VerificationReport verify_bound(const BoundCertificate& cert, const TruthFn& truth,
                                const std::vector<double>& grid, double slack = 1e-4,
                                int workers = 1);

} // namespace oscint
