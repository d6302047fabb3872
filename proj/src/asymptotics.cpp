#include "oscint/asymptotics.hpp"

#include "oscint/gammafn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace oscint {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

LeadingTerm leading_term_interior(const Amplitude& a, const Phase& ph) {
    if (!ph.stationary) throw std::invalid_argument("phase has no stationary point");
    double p1 = a.interval.lo;
    if (std::abs(ph.stationary->p0 - p1) > 1e-12 * std::max(1.0, std::abs(p1)))
        throw std::invalid_argument("leading_term_interior requires p0 = p1");
    double rho = ph.stationary->rho, mu = a.mu;
    cplx u1 = a.factor.eval(p1);
    if (a.mu < 1.0 && std::abs(u1) == 0.0)
        throw std::domain_error("degenerate leading term: regular factor vanishes at p1");
    // psi~ > 0 normalization; a negative factor reduces to this by conjugation
    double pt = std::abs(ph.nonvanishing_factor(p1 + 1e-9 * std::max(1.0, std::abs(p1))));
    LeadingTerm lt;
    lt.exponent = -mu / rho;
    lt.coefficient_modulus =
        std::pow(rho, mu / rho) / rho * gamma_fn(mu / rho) * std::abs(u1) / std::pow(pt, mu / rho);
    lt.phase_constant = std::polar(1.0, kPi / 2.0 * mu / rho) * (u1 / std::abs(u1));
    lt.phase_omega_coeff = ph.eval(p1);
    return lt;
}

std::pair<LeadingTerm, LeadingTerm> leading_term_nostat(const Amplitude& a, const Phase& ph) {
    double p1 = a.interval.lo, p2 = a.interval.hi, mu = a.mu;
    double d1 = ph.deriv(p1), d2 = ph.deriv(p2);
    if (d1 == 0.0 || d2 == 0.0 ||
        (ph.stationary && a.interval.contains(ph.stationary->p0)))
        throw std::invalid_argument("leading_term_nostat requires psi' nonvanishing on the interval");
    cplx u1 = a.factor.eval(p1);
    LeadingTerm first;
    first.exponent = -mu;
    first.coefficient_modulus = gamma_fn(mu) * std::abs(u1) / std::pow(std::abs(d1), mu);
    first.phase_constant =
        std::polar(1.0, kPi / 2.0 * mu) * (std::abs(u1) > 0 ? u1 / std::abs(u1) : cplx(1.0));
    first.phase_omega_coeff = ph.eval(p1);

    LeadingTerm second;
    second.exponent = -1.0;
    cplx U2 = std::pow(p2 - p1, mu - 1.0) * a.factor.eval(p2);
    second.coefficient_modulus = std::abs(U2) / std::abs(d2);
    second.phase_constant = std::polar(1.0, -kPi / 2.0);
    second.phase_omega_coeff = ph.eval(p2);
    return {first, second};
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& samples) {
    std::vector<std::pair<double, double>> pts;
    for (auto [x, y] : samples)
        if (x > 0.0 && y > 0.0) pts.emplace_back(std::log10(x), std::log10(y));
    if (pts.size() < 2)
        throw std::invalid_argument("fit_decay needs at least two positive samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [lx, ly] : pts) {
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    double n = (double)pts.size();
    double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
    if (vx <= 0.0) throw std::invalid_argument("fit_decay needs spread in x");
    DecayFit fit;
    fit.slope = cxy / vx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r_squared = vy > 0.0 ? std::min(1.0, (cxy * cxy) / (vx * vy)) : 1.0;
    auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    fit.x_min = mn->first;
    fit.x_max = mx->first;
    return fit;
}

std::vector<std::pair<double, double>> decade_envelope(
    const std::vector<std::pair<double, double>>& samples) {
    std::map<long, std::pair<double, double>> best;  // decade index -> (x, y max)
    for (auto [x, y] : samples) {
        if (x <= 0.0 || y <= 0.0) continue;
        long dec = (long)std::floor(std::log10(x) * (1.0 + 1e-12));
        auto it = best.find(dec);
        if (it == best.end() || y > it->second.second) best[dec] = {x, y};
    }
    std::vector<std::pair<double, double>> env;
    for (auto& [dec, xy] : best) env.push_back(xy);
    return env;
}

std::vector<std::pair<double, double>> optimality_ratio(const Amplitude& a, const Phase& ph,
                                                        const std::vector<double>& omegas,
                                                        double tol, const QuadOptions& opt) {
    bool interior = ph.stationary && a.interval.contains(ph.stationary->p0);
    LeadingTerm lt = interior ? leading_term_interior(a, ph) : leading_term_nostat(a, ph).first;
    if (lt.coefficient_modulus == 0.0)
        throw std::domain_error("optimality ratio undefined: vanishing leading term");
    std::vector<std::pair<double, double>> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        QuadResult qr = oscillatory_integral(a, ph, w, tol, opt);
        out.emplace_back(w, std::abs(qr.value) /
                                (lt.coefficient_modulus * std::pow(w, lt.exponent)));
    }
    return out;
}

} // namespace oscint
