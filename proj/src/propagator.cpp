#include "oscint/propagator.hpp"

#include "oscint/parallel.hpp"
#include "oscint/util.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oscint {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSmallTime = 1e-8;

double sgn(double x) { return x < 0 ? -1.0 : 1.0; }

// phase x p - t f(p) taken literally; used when t is too small for the
// drift form (the integral is barely oscillatory there)
Phase small_time_phase(const Symbol& s, double t, double x) {
    Phase ph;
    ph.eval = [f = s.f, t, x](double p) { return x * p - t * f(p); };
    ph.deriv = [fp = s.fprime, t, x](double p) { return x - t * fp(p); };
    ph.domain = {-1e300, 1e300};
    return ph;
}

QuadResult datum_integral(const Symbol& s, const InitialDatum& d, double t, double x, double tol,
                          const QuadOptions& opt) {
    Phase ph;
    double omega;
    if (t < kSmallTime) {
        ph = small_time_phase(s, t, x);
        omega = 1.0;
    } else {
        ph = make_drift_phase(s, x / t);
        omega = t;
    }
    if (d.kind == DatumKind::C1) {
        if (!d.band) throw std::invalid_argument("C1 datum without band");
        Amplitude a;
        a.p1 = d.singular_point;
        a.mu = d.mu;
        a.factor = d.factor;
        a.interval = *d.band;
        return oscillatory_integral(a, ph, std::max(omega, 1e-300), tol, opt);
    }
    return improper_oscillatory_integral(d, ph, omega, tol, opt);
}

} // namespace

ConeSpec cone(const Symbol& s, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("cone needs a < b");
    ConeSpec c;
    auto edge = [&](double p, bool upper) {
        if (std::isfinite(p)) return s.fprime(p);
        if (!s.fprime_limits)
            throw std::domain_error("infinite cone endpoint needs f' limit metadata");
        return upper ? s.fprime_limits->second : s.fprime_limits->first;
    };
    c.v_min = edge(a, false);
    c.v_max = edge(b, true);
    c.label = "cone(" + format_double(c.v_min) + "," + format_double(c.v_max) + ")";
    return c;
}

bool cone_contains(const ConeSpec& c, double t, double x) {
    if (!(t > 0.0)) return false;
    double v = x / t;
    return v > c.v_min && v < c.v_max;
}

bool cone_contains_velocity(const ConeSpec& c, double v) { return v > c.v_min && v < c.v_max; }

bool cone_boundary_velocity(const ConeSpec& c, double v) { return v == c.v_min || v == c.v_max; }

cplx solution_eval(const Symbol& s, const InitialDatum& d, double t, double x, double tol,
                   const QuadOptions& opt) {
    if (t < 0.0) throw std::invalid_argument("solution_eval needs t >= 0");
    QuadResult qr = datum_integral(s, d, t, x, tol, opt);
    return qr.value / (2.0 * kPi);
}

RaySample ray_sweep(const Symbol& s, const InitialDatum& d, double v,
                    const std::vector<double>& times, double tol, int workers,
                    const QuadOptions& opt) {
    RaySample out;
    out.v = v;
    out.times = times;
    out.values.assign(times.size(), cplx{0.0, 0.0});
    parallel_for(times.size(), workers, [&](std::size_t i) {
        out.values[i] = solution_eval(s, d, times[i], v * times[i], tol, opt);
    });
    return out;
}

std::pair<cplx_fn, cplx_fn> kg_coefficients(const cplx_fn& Fu0, const cplx_fn& Fv0, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("kg_coefficients needs c > 0");
    auto fkg = [c](double p) { return std::sqrt(c * c * c * c + c * c * p * p); };
    const cplx i{0.0, 1.0};
    cplx_fn plus = [Fu0, Fv0, fkg, i](double p) {
        return 0.5 * (Fu0(p) + i * Fv0(p) / fkg(p));
    };
    cplx_fn minus = [Fu0, Fv0, fkg, i](double p) {
        return 0.5 * (Fu0(p) - i * Fv0(p) / fkg(p));
    };
    return {plus, minus};
}

std::pair<InitialDatum, InitialDatum> kg_branch_data(const InitialDatum& u0, const cplx_fn& Fv0,
                                                     const cplx_fn& dFv0, double c,
                                                     std::optional<TailMajorant> tail_override) {
    if (!(c > 0.0)) throw std::invalid_argument("kg_branch_data needs c > 0");
    auto make = [&](double side) {
        InitialDatum d = u0;
        double mu = u0.mu, p1 = u0.singular_point;
        if (!Fv0) {
            d.factor.eval = [f = u0.factor.eval](double p) { return 0.5 * f(p); };
            d.factor.deriv = [g = u0.factor.deriv](double p) { return 0.5 * g(p); };
            if (u0.factor.analytic_sup) d.factor.analytic_sup = *u0.factor.analytic_sup / 2.0;
            if (u0.factor.analytic_l1_deriv)
                d.factor.analytic_l1_deriv = *u0.factor.analytic_l1_deriv / 2.0;
            if (u0.c3) d.c3 = C3Params{u0.c3->alpha, u0.c3->M / 2.0, u0.c3->Mprime / 2.0, u0.c3->r};
            if (u0.tail) d.tail = TailMajorant{u0.tail->A / 2.0, u0.tail->beta, u0.tail->p_min};
        } else {
            // regular factor of a+- = |p-p1|^(mu-1) factor(p): fold the
            // velocity datum through the same singular prefactor
            const cplx i{0.0, 1.0};
            auto fkg = [c](double p) { return std::sqrt(c * c * c * c + c * c * p * p); };
            auto dfkg = [c](double p) { return c * p / std::sqrt(c * c + p * p); };
            d.factor.eval = [f = u0.factor.eval, Fv0, fkg, side, i, mu, p1](double p) {
                double w = std::pow(std::abs(p - p1), 1.0 - mu);
                return 0.5 * (f(p) + side * i * w * Fv0(p) / fkg(p));
            };
            d.factor.deriv = [f = u0.factor.deriv, Fv0, dFv0, fkg, dfkg, side, i, mu,
                              p1](double p) {
                double ap = std::abs(p - p1);
                double w = std::pow(ap, 1.0 - mu);
                double dw = ap > 0.0 ? (1.0 - mu) * sgn(p - p1) * std::pow(ap, -mu) : 0.0;
                cplx q = Fv0(p) / fkg(p);
                cplx dq = dFv0(p) / fkg(p) - Fv0(p) * dfkg(p) / (fkg(p) * fkg(p));
                return 0.5 * (f(p) + side * i * (dw * q + w * dq));
            };
            d.factor.analytic_sup.reset();
            d.factor.analytic_l1_deriv.reset();
            d.c3.reset();
            d.tail = tail_override;
        }
        return d;
    };
    return {make(+1.0), make(-1.0)};
}

cplx kg_solution_eval(const InitialDatum& plus, const InitialDatum& minus, double c, double t,
                      double x, double tol, const QuadOptions& opt) {
    Symbol fkg = make_klein_gordon_symbol(c);
    cplx up = solution_eval(fkg, plus, t, x, tol, opt);
    // -f branch: integral of a-(p) e^{+i t f + i x p} equals the conjugate of
    // the +f integral with conjugated datum at -x
    InitialDatum conj_minus = minus;
    conj_minus.factor.eval = [f = minus.factor.eval](double p) { return std::conj(f(p)); };
    conj_minus.factor.deriv = [g = minus.factor.deriv](double p) { return std::conj(g(p)); };
    cplx um = std::conj(solution_eval(fkg, conj_minus, t, -x, tol, opt));
    return up + um;
}

std::vector<InitialDatum> band_decompose(const InitialDatum& d,
                                         const std::vector<double>& breakpoints) {
    if (!d.band) throw std::invalid_argument("band_decompose needs a banded datum");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i - 1] < breakpoints[i]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    std::vector<double> cuts{d.band->lo};
    for (double b : breakpoints)
        if (b > d.band->lo && b < d.band->hi) cuts.push_back(b);
    cuts.push_back(d.band->hi);
    std::vector<InitialDatum> parts;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        InitialDatum piece = d;
        piece.band = Interval{cuts[i], cuts[i + 1]};
        bool last = (i + 2 == cuts.size());
        // half-open [lo, hi); the final piece keeps the right endpoint
        double lo = cuts[i], hi = cuts[i + 1];
        piece.factor.eval = [f = d.factor.eval, lo, hi, last](double p) {
            bool in = last ? (p >= lo && p <= hi) : (p >= lo && p < hi);
            return in ? f(p) : cplx{0.0, 0.0};
        };
        piece.factor.deriv = [g = d.factor.deriv, lo, hi, last](double p) {
            bool in = last ? (p >= lo && p <= hi) : (p >= lo && p < hi);
            return in ? g(p) : cplx{0.0, 0.0};
        };
        parts.push_back(std::move(piece));
    }
    return parts;
}

LocalizationReport localization_report(const Symbol& s, const InitialDatum& d,
                                       const std::vector<ConeSpec>& cones,
                                       const std::vector<CertificateGroup>& groups,
                                       const std::vector<double>& rays,
                                       const std::vector<double>& times, double tol, int workers,
                                       const QuadOptions& opt, double slack) {
    LocalizationReport rep;
    rep.symbol = s.name;
    for (double v : rays) {
        RayReport rr;
        rr.v = v;
        rr.sample = ray_sweep(s, d, v, times, tol, workers, opt);
        std::vector<std::pair<double, double>> mods;
        for (std::size_t i = 0; i < times.size(); ++i)
            mods.emplace_back(times[i], std::abs(rr.sample.values[i]));
        rr.fit = fit_decay(decade_envelope(mods));
        for (const ConeSpec& c : cones) {
            if (cone_contains_velocity(c, v)) rr.cone_labels.push_back(c.label);
            if (cone_boundary_velocity(c, v)) rr.boundary = true;
        }
        for (const CertificateGroup& g : groups) {
            bool applies = g.inside ? cone_contains_velocity(g.cone, v)
                                    : !cone_contains_velocity(g.cone, v);
            if (!applies) continue;
            double max_ratio = 0.0;
            for (std::size_t i = 0; i < times.size(); ++i) {
                double bound = 0.0;
                for (const BoundCertificate& c : g.certs)
                    bound += c.constant * std::pow(times[i], c.decay_exponent);
                if (bound > 0.0)
                    max_ratio = std::max(max_ratio, std::abs(rr.sample.values[i]) / bound);
                else if (std::abs(rr.sample.values[i]) > 0.0)
                    max_ratio = kInf;
            }
            rr.dominated[g.label] = max_ratio <= 1.0 + slack;
        }
        rep.rays.push_back(std::move(rr));
    }
    return rep;
}

std::string localization_to_json(const LocalizationReport& rep) {
    nlohmann::json j;
    j["schema"] = 1;
    j["symbol"] = rep.symbol;
    j["datum"] = rep.datum;
    nlohmann::json arr = nlohmann::json::array();
    for (const RayReport& rr : rep.rays) {
        nlohmann::json r;
        r["v"] = rr.v;
        r["slope"] = rr.fit.slope;
        r["r2"] = rr.fit.r_squared;
        r["cone_labels"] = rr.cone_labels;
        r["boundary"] = rr.boundary;
        r["dominated"] = rr.dominated;
        arr.push_back(r);
    }
    j["rays"] = arr;
    return j.dump(2);
}

std::string ray_csv(const RaySample& ray) {
    std::string out = "v,t,re,im,abs\n";
    for (std::size_t i = 0; i < ray.times.size(); ++i) {
        out += format_double(ray.v);
        out += ',';
        out += format_double(ray.times[i]);
        out += ',';
        out += format_double(ray.values[i].real());
        out += ',';
        out += format_double(ray.values[i].imag());
        out += ',';
        out += format_double(std::abs(ray.values[i]));
        out += '\n';
    }
    return out;
}

} // namespace oscint
