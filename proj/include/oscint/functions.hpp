#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oscint {

using cplx = std::complex<double>;
using real_fn = std::function<double(double)>;
using cplx_fn = std::function<cplx(double)>;

struct Interval {
    double lo = 0.0, hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double p) const { return lo <= p && p <= hi; }
};

// Smooth factor of an amplitude or frequency datum.  The analytic_* fields
// are optional exact norms supplied by the caller; when present they take
// precedence over sampled estimates.  For an Amplitude they refer to its
// interval, for an InitialDatum to the whole line.
struct RegularFactor {
    cplx_fn eval;
    cplx_fn deriv;
    std::optional<double> analytic_sup;
    std::optional<double> analytic_l1_deriv;
};

// U(p) = (p - p1)^(mu-1) * factor(p) on a bounded interval (p1, p2].
struct Amplitude {
    double p1 = 0.0;        // singular point
    double mu = 1.0;        // singular strength, in (0, 1]
    RegularFactor factor;   // u-tilde
    Interval interval;      // [p1, p2]
};

cplx amplitude_eval(const Amplitude& a, double p);

struct StationaryPoint {
    double p0 = 0.0;   // where psi' vanishes
    double rho = 2.0;  // order + 1; psi'(p) = |p-p0|^(rho-1) * psi_tilde(p)
};

// Phase with an optional stationary point of real order.  When `stationary`
// is empty the phase derivative is bounded away from zero on the domain and
// min_slope carries a lower bound for |psi'| (0 if unknown).
struct Phase {
    real_fn eval;
    real_fn deriv;
    std::optional<StationaryPoint> stationary;
    real_fn nonvanishing_factor;  // psi-tilde; empty when no stationary point
    Interval domain;              // open interval containing the integration range
    double min_slope = 0.0;
    // one-sided values of psi-tilde at p0 (psi-tilde may jump there)
    double psi_tilde_left = 0.0, psi_tilde_right = 0.0;
};

// f'' bounds at infinity: c-|p|^-beta- <= f''(p) <= c+|p|^-beta+ for |p| >= R.
struct GrowthMeta {
    double beta_plus = 0.0, beta_minus = 0.0;
    double c_plus = 0.0, c_minus = 0.0;
    double R = 1.0;
};

struct Symbol {
    std::string name;
    real_fn f, fprime, fsecond;
    std::optional<GrowthMeta> growth;
    std::optional<std::pair<double, double>> fprime_limits;  // limits at -inf, +inf
};

enum class DatumKind { C1, C2, C3 };

struct C3Params {
    double alpha = 0.0;   // decay exponent of the regular factor
    double M = 0.0;       // |u-tilde(p)| <= M (1+p^2)^(-alpha/2)
    double Mprime = 0.0;  // per-unit-interval L1 bound on u-tilde'
    double r = 0.0;       // the L1 bound holds for |n| >= r
};

// |Fu0(p)| <= A |p|^-beta for |p| >= p_min; truncation majorant for data
// without per-band metadata.
struct TailMajorant {
    double A = 0.0, beta = 0.0, p_min = 1.0;
};

// Frequency-side initial datum.  Fu0(p) = |p - p1|^(mu-1) * factor(p); for
// C1 the support is the band and the signed form applies.  The c3 record is
// mandatory for C3 data and doubles as decay metadata for C2 data that have
// it; `tail` is the fallback truncation majorant.
struct InitialDatum {
    DatumKind kind = DatumKind::C1;
    std::optional<Interval> band;  // C1 only
    double singular_point = 0.0;   // fixed at 0 for C3
    double mu = 1.0;
    RegularFactor factor;
    std::optional<C3Params> c3;
    std::optional<TailMajorant> tail;
};

cplx datum_eval(const InitialDatum& d, double p);

// p0 = (f')^{-1}(v); range error when v is outside the range of f'.
double invert_fprime(const Symbol& s, double v);

// psi(p) = v p - f(p) with ordinary stationary point p0 = (f')^{-1}(v) when
// v is in the range of f'; otherwise a stationary-point-free phase whose
// min_slope is the distance from v to the closure of f'(R).
Phase make_drift_phase(const Symbol& s, double v);

// |p - p0|^(rho-1) derivative with psi-tilde == 1, domain R.
Phase make_power_phase(double p0, double rho);

struct Catalog {
    std::map<std::string, Symbol> symbols;
    std::map<std::string, Phase> phases;
    std::map<std::string, Amplitude> amplitudes;
    std::map<std::string, InitialDatum> data;
};

Symbol make_schrodinger_symbol();
Symbol make_klein_gordon_symbol(double c);
RegularFactor make_const_factor(cplx value);
RegularFactor make_poly_factor(std::vector<double> coeffs);  // ascending coefficients
RegularFactor make_gauss_factor();                           // exp(-p^2)
RegularFactor make_inverse_power_factor(double alpha);       // (1+p^2)^(-alpha/2), global norms
InitialDatum make_c3_example_datum(double mu, double alpha);
InitialDatum make_c2_witch_datum(double mu, double alpha, double p1 = 0.0);
InitialDatum make_c1_band_datum(double mu, Interval band);
InitialDatum make_indicator_datum(Interval band);        // Fu0 = chi_band

const Catalog& builtin_catalog();

// Sampled invariant checks.  Each returns human-readable violations; an
// empty vector means the instance passed.
std::vector<std::string> check_phase(const Phase& ph, Interval range, int samples = 1000,
                                     double rel_tol = 1e-8);
std::vector<std::string> check_amplitude(const Amplitude& a, int samples = 1000);
std::vector<std::string> check_symbol(const Symbol& s, Interval range, int samples = 1000);
std::vector<std::string> check_datum(const InitialDatum& d, int samples = 1000);

} // namespace oscint
