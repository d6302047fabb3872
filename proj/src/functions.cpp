#include "oscint/functions.hpp"

#include <cmath>
#include <stdexcept>

namespace oscint {

namespace {

constexpr double kBigNumber = 1e300;

double sgn(double x) { return x < 0 ? -1.0 : 1.0; }

// 513-point composite Simpson; local helper so invariant checks do not pull
// in the adaptive quadrature module.
double simpson_abs(const cplx_fn& g, double a, double b) {
    const int n = 512;
    double h = (b - a) / n, s = std::abs(g(a)) + std::abs(g(b));
    for (int i = 1; i < n; ++i) s += std::abs(g(a + i * h)) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

cplx amplitude_eval(const Amplitude& a, double p) {
    if (p < a.interval.lo || p > a.interval.hi)
        throw std::domain_error("amplitude_eval: point outside the amplitude interval");
    if (p == a.p1 && a.mu < 1.0)
        throw std::domain_error("amplitude_eval: amplitude is singular at p1");
    return std::pow(std::abs(p - a.p1), a.mu - 1.0) * a.factor.eval(p);
}

cplx datum_eval(const InitialDatum& d, double p) {
    if (d.band && !d.band->contains(p)) return 0.0;
    if (p == d.singular_point && d.mu < 1.0)
        throw std::domain_error("datum_eval: datum is singular at its singular frequency");
    return std::pow(std::abs(p - d.singular_point), d.mu - 1.0) * d.factor.eval(p);
}

double invert_fprime(const Symbol& s, double v) {
    if (s.fprime_limits) {
        auto [a, b] = *s.fprime_limits;
        if (!(v > a && v < b))
            throw std::range_error("invert_fprime: value outside the range of f'");
    }
    // bracket by doubling; f' is strictly increasing
    double lo = -1.0, hi = 1.0;
    for (int i = 0; i < 80 && s.fprime(lo) >= v; ++i) lo *= 2.0;
    for (int i = 0; i < 80 && s.fprime(hi) <= v; ++i) hi *= 2.0;
    if (s.fprime(lo) >= v || s.fprime(hi) <= v)
        throw std::range_error("invert_fprime: could not bracket the target value");
    for (int i = 0; i < 90; ++i) {
        double mid = 0.5 * (lo + hi);
        (s.fprime(mid) < v ? lo : hi) = mid;
    }
    // Newton polish with f''
    double p = 0.5 * (lo + hi);
    for (int i = 0; i < 6; ++i) {
        double g = s.fprime(p) - v, gp = s.fsecond(p);
        if (gp <= 0.0) break;
        double step = g / gp;
        double q = p - step;
        if (q < lo || q > hi) break;
        p = q;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(p))) break;
    }
    return p;
}

Phase make_drift_phase(const Symbol& s, double v) {
    Phase ph;
    ph.eval = [f = s.f, v](double p) { return v * p - f(p); };
    ph.deriv = [fp = s.fprime, v](double p) { return v - fp(p); };
    ph.domain = {-kBigNumber, kBigNumber};

    bool in_range = true;
    if (s.fprime_limits) {
        auto [a, b] = *s.fprime_limits;
        in_range = (v > a && v < b);
        if (!in_range) ph.min_slope = (v <= a) ? a - v : v - b;
    }
    if (!in_range) return ph;

    double p0 = invert_fprime(s, v);
    ph.stationary = StationaryPoint{p0, 2.0};
    double fpp0 = s.fsecond(p0);
    double window = 1e-6 * std::max(1.0, std::abs(p0));
    // quotient form away from p0; the paper's limiting value -f''(p0) inside
    ph.nonvanishing_factor = [fp = s.fprime, v, p0, fpp0, window](double p) {
        double d = p - p0;
        if (std::abs(d) <= window) return -fpp0;
        return (v - fp(p)) / std::abs(d);
    };
    ph.psi_tilde_left = fpp0;
    ph.psi_tilde_right = -fpp0;
    return ph;
}

Phase make_power_phase(double p0, double rho) {
    Phase ph;
    if (rho == 2.0) {
        ph.eval = [p0](double p) {
            double d = p - p0;
            return 0.5 * d * std::abs(d);
        };
        ph.deriv = [p0](double p) { return std::abs(p - p0); };
    } else if (rho == 3.0) {
        ph.eval = [p0](double p) {
            double d = p - p0;
            return d * d * d / 3.0;
        };
        ph.deriv = [p0](double p) {
            double d = p - p0;
            return d * d;
        };
    } else {
        ph.eval = [p0, rho](double p) {
            double d = p - p0;
            return sgn(d) * std::pow(std::abs(d), rho) / rho;
        };
        ph.deriv = [p0, rho](double p) { return std::pow(std::abs(p - p0), rho - 1.0); };
    }
    ph.stationary = StationaryPoint{p0, rho};
    ph.nonvanishing_factor = [](double) { return 1.0; };
    ph.psi_tilde_left = ph.psi_tilde_right = 1.0;
    ph.domain = {-kBigNumber, kBigNumber};
    return ph;
}

Symbol make_schrodinger_symbol() {
    Symbol s;
    s.name = "schrodinger";
    s.f = [](double p) { return p * p; };
    s.fprime = [](double p) { return 2.0 * p; };
    s.fsecond = [](double) { return 2.0; };
    return s;
}

Symbol make_klein_gordon_symbol(double c) {
    Symbol s;
    s.name = "klein-gordon";
    s.f = [c](double p) { return std::sqrt(c * c * c * c + c * c * p * p); };
    s.fprime = [c](double p) { return c * p / std::sqrt(c * c + p * p); };
    s.fsecond = [c](double p) {
        double q = c * c + p * p;
        return c * c * c / (q * std::sqrt(q));
    };
    double c3 = c * c * c;
    s.growth = GrowthMeta{3.0, 3.0, c3, c3 * std::pow(2.0, -1.5), std::max(c, 1.0)};
    s.fprime_limits = std::make_pair(-c, c);
    return s;
}

RegularFactor make_const_factor(cplx value) {
    RegularFactor rf;
    rf.eval = [value](double) { return value; };
    rf.deriv = [](double) { return cplx(0.0); };
    rf.analytic_sup = std::abs(value);
    rf.analytic_l1_deriv = 0.0;
    return rf;
}

RegularFactor make_poly_factor(std::vector<double> coeffs) {
    RegularFactor rf;
    rf.eval = [coeffs](double p) {
        double v = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) v = v * p + coeffs[k];
        return cplx(v);
    };
    rf.deriv = [coeffs](double p) {
        double v = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) v = v * p + k * coeffs[k];
        return cplx(v);
    };
    return rf;
}

RegularFactor make_gauss_factor() {
    RegularFactor rf;
    rf.eval = [](double p) { return cplx(std::exp(-p * p)); };
    rf.deriv = [](double p) { return cplx(-2.0 * p * std::exp(-p * p)); };
    return rf;
}

RegularFactor make_inverse_power_factor(double alpha) {
    RegularFactor rf;
    rf.eval = [alpha](double p) { return cplx(std::pow(1.0 + p * p, -alpha / 2.0)); };
    rf.deriv = [alpha](double p) {
        return cplx(-alpha * p * std::pow(1.0 + p * p, -alpha / 2.0 - 1.0));
    };
    rf.analytic_sup = 1.0;      // attained at p = 0
    rf.analytic_l1_deriv = 2.0; // total variation over the line
    return rf;
}

InitialDatum make_c3_example_datum(double mu, double alpha) {
    InitialDatum d;
    d.kind = DatumKind::C3;
    d.singular_point = 0.0;
    d.mu = mu;
    d.factor = make_inverse_power_factor(alpha);
    d.c3 = C3Params{alpha, 1.0, std::pow(2.0, alpha), 2.0};
    d.tail = TailMajorant{1.0, alpha + 1.0 - mu, 1.0};
    return d;
}

InitialDatum make_c2_witch_datum(double mu, double alpha, double p1) {
    InitialDatum d;
    d.kind = DatumKind::C2;
    d.singular_point = p1;
    d.mu = mu;
    d.factor = make_inverse_power_factor(alpha);
    d.c3 = C3Params{alpha, 1.0, std::pow(2.0, alpha), 2.0};
    d.tail = TailMajorant{1.0, alpha + 1.0 - mu, std::max(1.0, 4.0 * std::abs(p1))};
    return d;
}

InitialDatum make_c1_band_datum(double mu, Interval band) {
    InitialDatum d;
    d.kind = DatumKind::C1;
    d.band = band;
    d.singular_point = band.lo;
    d.mu = mu;
    d.factor = make_const_factor(1.0);
    return d;
}

InitialDatum make_indicator_datum(Interval band) {
    InitialDatum d = make_c1_band_datum(1.0, band);
    return d;
}

const Catalog& builtin_catalog() {
    static const Catalog cat = [] {
        Catalog c;
        c.symbols["schrodinger"] = make_schrodinger_symbol();
        c.symbols["klein-gordon c=1"] = make_klein_gordon_symbol(1.0);

        c.phases["linear"] = [] {
            Phase ph;
            ph.eval = [](double p) { return p; };
            ph.deriv = [](double) { return 1.0; };
            ph.domain = {-kBigNumber, kBigNumber};
            ph.min_slope = 1.0;
            return ph;
        }();
        c.phases["square"] = [] {
            Phase ph;
            ph.eval = [](double p) { return p * p; };
            ph.deriv = [](double p) { return 2.0 * p; };
            ph.stationary = StationaryPoint{0.0, 2.0};
            ph.nonvanishing_factor = [](double p) { return p < 0 ? -2.0 : 2.0; };
            ph.psi_tilde_left = -2.0;
            ph.psi_tilde_right = 2.0;
            ph.domain = {-kBigNumber, kBigNumber};
            return ph;
        }();
        // psi = 4p - p^2: stationary point at 2, outside the usual [0,1] range
        c.phases["nostat-quadratic"] = [] {
            Phase ph;
            ph.eval = [](double p) { return 4.0 * p - p * p; };
            ph.deriv = [](double p) { return 4.0 - 2.0 * p; };
            ph.stationary = StationaryPoint{2.0, 2.0};
            ph.nonvanishing_factor = [](double p) { return p < 2.0 ? 2.0 : -2.0; };
            ph.psi_tilde_left = 2.0;
            ph.psi_tilde_right = -2.0;
            ph.domain = {-kBigNumber, kBigNumber};
            return ph;
        }();
        c.phases["power rho=2 p0=0"] = make_power_phase(0.0, 2.0);
        c.phases["power rho=3 p0=0"] = make_power_phase(0.0, 3.0);

        c.amplitudes["one mu=1 [0,1]"] = Amplitude{0.0, 1.0, make_const_factor(1.0), {0.0, 1.0}};
        c.amplitudes["one mu=0.5 [0,1]"] = Amplitude{0.0, 0.5, make_const_factor(1.0), {0.0, 1.0}};

        c.data["c1-band01 mu=0.5"] = make_c1_band_datum(0.5, {0.0, 1.0});
        c.data["c2-witch mu=0.5"] = make_c2_witch_datum(0.5, 4.0);
        c.data["c3-example mu=0.5 alpha=4"] = make_c3_example_datum(0.5, 4.0);
        c.data["indicator [-1,1]"] = make_indicator_datum({-1.0, 1.0});
        return c;
    }();
    return cat;
}

std::vector<std::string> check_phase(const Phase& ph, Interval range, int samples, double rel_tol) {
    std::vector<std::string> bad;
    if (!ph.stationary) {
        if (ph.min_slope <= 0.0) bad.push_back("no stationary point but min_slope not positive");
        return bad;
    }
    double p0 = ph.stationary->p0, rho = ph.stationary->rho;
    double window = 2e-6 * std::max(1.0, std::abs(p0));
    int recon_bad = 0, vanish = 0;
    for (int i = 0; i <= samples; ++i) {
        double p = range.lo + range.length() * i / samples;
        if (std::abs(ph.nonvanishing_factor(p)) <= 0.0) ++vanish;
        if (std::abs(p - p0) > window) {
            double lhs = ph.deriv(p);
            double rhs = std::pow(std::abs(p - p0), rho - 1.0) * ph.nonvanishing_factor(p);
            if (std::abs(lhs - rhs) > rel_tol * std::max({1e-30, std::abs(lhs), std::abs(rhs)}))
                ++recon_bad;
        }
    }
    // finite-difference monotonicity of psi' on each side of p0
    auto monotone_on = [&](double lo, double hi) {
        if (hi <= lo) return true;
        int incr = 0, decr = 0;
        double last = 0.0;
        bool have = false;
        for (int i = 0; i <= samples; ++i) {
            double p = lo + (hi - lo) * i / samples;
            double d = ph.deriv(p);
            if (have && d != last) (d > last ? incr : decr) += 1;
            last = d;
            have = true;
        }
        return !(incr && decr);
    };
    if (!monotone_on(range.lo, std::min(range.hi, p0 - window)))
        bad.push_back("psi' not monotone left of p0");
    if (!monotone_on(std::max(range.lo, p0 + window), range.hi))
        bad.push_back("psi' not monotone right of p0");
    if (vanish) bad.push_back("nonvanishing factor vanishes on the interval");
    if (recon_bad) bad.push_back("deriv != |p-p0|^(rho-1) * psi_tilde at " +
                                 std::to_string(recon_bad) + " sample points");
    return bad;
}

std::vector<std::string> check_amplitude(const Amplitude& a, int samples) {
    std::vector<std::string> bad;
    if (!(a.mu > 0.0 && a.mu <= 1.0)) bad.push_back("mu outside (0,1]");
    if (!(a.interval.lo < a.interval.hi)) bad.push_back("empty amplitude interval");
    if (a.mu != 1.0 && std::abs(a.factor.eval(a.p1)) <= 0.0)
        bad.push_back("regular factor vanishes at the singular point");
    double sup = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double p = a.interval.lo + a.interval.length() * i / samples;
        double v = std::abs(a.factor.eval(p));
        if (!std::isfinite(v)) {
            bad.push_back("regular factor not finite at p=" + std::to_string(p));
            return bad;
        }
        sup = std::max(sup, v);
    }
    if (a.factor.analytic_sup && sup > *a.factor.analytic_sup * (1.0 + 1e-12))
        bad.push_back("sampled sup exceeds the declared analytic sup");
    return bad;
}

std::vector<std::string> check_symbol(const Symbol& s, Interval range, int samples) {
    std::vector<std::string> bad;
    for (int i = 0; i <= samples; ++i) {
        double p = range.lo + range.length() * i / samples;
        if (s.fsecond(p) <= 0.0) {
            bad.push_back("f'' not positive at p=" + std::to_string(p));
            break;
        }
    }
    if (s.growth) {
        const GrowthMeta& g = *s.growth;
        if (!(g.beta_minus >= g.beta_plus && g.beta_plus > 1.0))
            bad.push_back("growth exponents must satisfy beta- >= beta+ > 1");
        if (!(g.c_plus >= g.c_minus && g.c_minus > 0.0))
            bad.push_back("growth constants must satisfy c+ >= c- > 0");
        if (!(g.R >= 1.0)) bad.push_back("growth radius R must be >= 1");
        for (int i = 0; i <= samples; ++i) {
            double mag = g.R * std::pow(100.0, double(i) / samples);
            for (double p : {mag, -mag}) {
                double f2 = s.fsecond(p);
                double lo = g.c_minus * std::pow(std::abs(p), -g.beta_minus);
                double hi = g.c_plus * std::pow(std::abs(p), -g.beta_plus);
                if (f2 < lo * (1.0 - 1e-9) || f2 > hi * (1.0 + 1e-9)) {
                    bad.push_back("f'' escapes its growth envelope at p=" + std::to_string(p));
                    i = samples + 1;
                    break;
                }
            }
        }
    }
    if (s.fprime_limits) {
        auto [a, b] = *s.fprime_limits;
        double span = b - a;
        if (std::abs(s.fprime(-1e6) - a) > 1e-6 * span ||
            std::abs(s.fprime(1e6) - b) > 1e-6 * span)
            bad.push_back("f' far-field values disagree with the declared limits");
    }
    return bad;
}

std::vector<std::string> check_datum(const InitialDatum& d, int samples) {
    std::vector<std::string> bad;
    if (!(d.mu > 0.0 && d.mu <= 1.0)) bad.push_back("mu outside (0,1]");
    switch (d.kind) {
    case DatumKind::C1: {
        if (!d.band) { bad.push_back("C1 datum without a band"); break; }
        if (std::abs(d.factor.eval(d.band->lo)) <= 0.0)
            bad.push_back("C1 regular factor vanishes at the band edge");
        break;
    }
    case DatumKind::C2: {
        if (!(d.mu < 1.0)) bad.push_back("C2 requires mu strictly inside (0,1)");
        for (int i = 0; i <= samples; ++i) {
            double p = -50.0 + 100.0 * i / samples;
            if (!std::isfinite(std::abs(d.factor.eval(p)))) {
                bad.push_back("C2 regular factor not finite");
                break;
            }
        }
        break;
    }
    case DatumKind::C3: {
        if (!d.c3) { bad.push_back("C3 datum without its parameter record"); break; }
        const C3Params& c = *d.c3;
        if (!(c.alpha > d.mu)) bad.push_back("C3 requires alpha > mu");
        for (int i = 0; i <= samples; ++i) {
            double p = -100.0 + 200.0 * i / samples;
            double cap = c.M * std::pow(1.0 + p * p, -c.alpha / 2.0);
            if (std::abs(d.factor.eval(p)) > cap * (1.0 + 1e-12)) {
                bad.push_back("C3 regular factor exceeds M(1+p^2)^(-alpha/2) at p=" +
                              std::to_string(p));
                break;
            }
        }
        int n0 = std::max(1, (int)std::ceil(c.r));
        for (int n : {n0, n0 + 1, n0 + 2, n0 + 5, 4 * n0, 16 * n0}) {
            for (int m : {n, -n - 1}) {
                double l1 = simpson_abs(d.factor.deriv, m, m + 1.0);
                double lim = c.Mprime * std::pow(std::abs((double)m), -c.alpha);
                if (l1 > lim * (1.0 + 1e-9))
                    bad.push_back("per-unit L1 norm of the factor derivative exceeds M'|n|^-alpha at n=" +
                                  std::to_string(m));
            }
        }
        break;
    }
    }
    return bad;
}

} // namespace oscint
