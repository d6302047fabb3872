#pragma once

#include "oscint/asymptotics.hpp"
#include "oscint/bounds.hpp"

namespace oscint {

// Open velocity cone f'(a) < x/t < f'(b); infinite endpoints use the
// declared limits of f'.
struct ConeSpec {
    double v_min = 0.0, v_max = 0.0;
    std::string label;
};

ConeSpec cone(const Symbol& s, double a, double b);
bool cone_contains(const ConeSpec& c, double t, double x);      // strict inequalities
bool cone_contains_velocity(const ConeSpec& c, double v);
bool cone_boundary_velocity(const ConeSpec& c, double v);

// u(t,x) = (1/2pi) integral of Fu0(p) e^{-i t f(p) + i x p} dp.  The full
// result keeps the convergence flag; the plain form throws when the panel
// budget was exhausted rather than returning a silently inaccurate value.
QuadResult solution_eval_result(const Symbol& s, const InitialDatum& d, double t, double x,
                                double tol, const QuadOptions& opt = {});
cplx solution_eval(const Symbol& s, const InitialDatum& d, double t, double x, double tol,
                   const QuadOptions& opt = {});

struct RaySample {
    double v = 0.0;
    std::vector<double> times;
    std::vector<cplx> values;
    std::vector<char> converged;  // per time point
};

RaySample ray_sweep(const Symbol& s, const InitialDatum& d, double v,
                    const std::vector<double>& times, double tol, int workers = 1,
                    const QuadOptions& opt = {});

// a+-(p) = (Fu0(p) +- i Fv0(p) / f_KG(p)) / 2.
std::pair<cplx_fn, cplx_fn> kg_coefficients(const cplx_fn& Fu0, const cplx_fn& Fv0, double c);

// Frequency data of the two wave branches.  With a null Fv0 the branches are
// the halved initial datum and keep its decay metadata; otherwise the caller
// provides the truncation majorant for the combined factors.
std::pair<InitialDatum, InitialDatum> kg_branch_data(
    const InitialDatum& u0, const cplx_fn& Fv0, const cplx_fn& dFv0, double c,
    std::optional<TailMajorant> tail_override = std::nullopt);

// u_KG = branch with symbol f_KG plus branch with symbol -f_KG; the second
// is evaluated through the conjugation identity, no separate code path.
cplx kg_solution_eval(const InitialDatum& plus, const InitialDatum& minus, double c, double t,
                      double x, double tol, const QuadOptions& opt = {});

// Splits a banded datum at the given breakpoints (half-open pieces, the last
// piece keeps the band's right endpoint).
std::vector<InitialDatum> band_decompose(const InitialDatum& d,
                                         const std::vector<double>& breakpoints);

// A certificate sum attached to one side of a cone; applicable to a ray when
// it runs inside the open cone (inside=true) or in the closed complement.
struct CertificateGroup {
    std::string label;
    ConeSpec cone;
    bool inside = true;
    std::vector<BoundCertificate> certs;
};

struct RayReport {
    double v = 0.0;
    DecayFit fit;
    std::vector<std::string> cone_labels;
    bool boundary = false;
    std::map<std::string, bool> dominated;
    RaySample sample;
};

struct LocalizationReport {
    std::string symbol;
    std::string datum;
    std::vector<RayReport> rays;
};

LocalizationReport localization_report(const Symbol& s, const InitialDatum& d,
                                       const std::vector<ConeSpec>& cones,
                                       const std::vector<CertificateGroup>& groups,
                                       const std::vector<double>& rays,
                                       const std::vector<double>& times, double tol,
                                       int workers = 1, const QuadOptions& opt = {},
                                       double slack = 1e-4);

std::string localization_to_json(const LocalizationReport& rep);
std::string ray_csv(const RaySample& ray);  // header v,t,re,im,abs

} // namespace oscint
