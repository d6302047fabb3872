#include "oscint/bounds.hpp"

#include "oscint/parallel.hpp"
#include "oscint/util.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oscint {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct AmpNorms {
    double sup = 0.0;
    double l1 = 0.0;
};

AmpNorms amplitude_norms(const Amplitude& a) {
    return {factor_sup(a.factor, a.interval, true), factor_l1_deriv(a.factor, a.interval, true)};
}

double phase_min_factor(const Amplitude& a, const Phase& ph) {
    if (!ph.stationary) throw std::domain_error("phase has no stationary point factorization");
    double m = min_abs(ph.nonvanishing_factor, a.interval);
    if (m <= 0.0) throw std::domain_error("assumption violated: psi~ touches zero on the interval");
    return m;
}

// line norms of a datum's regular factor; falls back to a wide window
AmpNorms line_norms(const InitialDatum& d) {
    Interval wide{d.singular_point - 50.0, d.singular_point + 50.0};
    return {factor_sup(d.factor, wide, true), factor_l1_deriv(d.factor, wide, true)};
}

double fpp_min(const Symbol& s, Interval it) {
    double m = min_abs(s.fsecond, it);
    if (m <= 0.0) throw std::domain_error("assumption violated: f'' touches zero");
    return m;
}

} // namespace

std::string to_string(TheoremTag tag) {
    switch (tag) {
    case TheoremTag::T3_3: return "T3.3";
    case TheoremTag::T3_6: return "T3.6";
    case TheoremTag::T3_8: return "T3.8";
    case TheoremTag::T3_12: return "T3.12";
    case TheoremTag::T4_3_in: return "T4.3-in";
    case TheoremTag::T4_3_out: return "T4.3-out";
    case TheoremTag::T4_4: return "T4.4";
    case TheoremTag::T4_7: return "T4.7";
    case TheoremTag::T4_8: return "T4.8";
    case TheoremTag::T5_4_in: return "T5.4-in";
    case TheoremTag::T5_4_out: return "T5.4-out";
    }
    return "?";
}

std::string certificate_to_json(const BoundCertificate& cert) {
    nlohmann::json j;
    j["theorem_tag"] = to_string(cert.theorem_tag);
    j["constant"] = cert.constant;
    j["decay_exponent"] = cert.decay_exponent;
    j["regime"] = cert.regime;
    j["ingredients"] = cert.ingredients;
    return j.dump(2);
}

BoundCertificate vdc_interior_constant(const Amplitude& a, const Phase& ph) {
    AmpNorms n = amplitude_norms(a);
    double m = phase_min_factor(a, ph);
    double mu = a.mu, rho = ph.stationary->rho;
    BoundCertificate cert;
    cert.theorem_tag = TheoremTag::T3_3;
    cert.decay_exponent = -mu / rho;
    cert.regime = "all omega > 0, p0 in [p1,p2]";
    cert.constant = (mu == 1.0) ? 2.0 * n.sup + (6.0 * n.sup + 2.0 * n.l1) / m
                                : 3.0 / mu * n.sup + (8.0 * n.sup + 2.0 * n.l1) / m;
    cert.ingredients = {{"sup_u", n.sup}, {"l1_du", n.l1}, {"m", m}, {"mu", mu}, {"rho", rho}};
    return cert;
}

BoundCertificate vdc_exterior_constant(const Amplitude& a, const Phase& ph) {
    AmpNorms n = amplitude_norms(a);
    double m = phase_min_factor(a, ph);
    double mu = a.mu, rho = ph.stationary->rho;
    BoundCertificate cert;
    cert.theorem_tag = TheoremTag::T3_6;
    cert.decay_exponent = -mu / rho;
    cert.regime = "all omega > 0, p0 outside [p1,p2]";
    cert.constant = (mu == 1.0) ? 2.0 * n.sup + (3.0 * n.sup + n.l1) / m
                                : 2.0 / mu * n.sup + (4.0 * n.sup + n.l1) / m;
    cert.ingredients = {{"sup_u", n.sup}, {"l1_du", n.l1}, {"m", m}, {"mu", mu}, {"rho", rho}};
    return cert;
}

BoundCertificate vdc_combined_constant(const Amplitude& a, const Phase& ph) {
    BoundCertificate cert = vdc_interior_constant(a, ph);
    cert.theorem_tag = TheoremTag::T3_8;
    cert.regime = "all omega > 0, any p0 in the phase domain";
    return cert;
}

BoundCertificate nostationary_constant(const Amplitude& a, const Phase& ph) {
    AmpNorms n = amplitude_norms(a);
    double m = min_abs(ph.deriv, a.interval);
    if (m <= 0.0)
        throw std::domain_error("assumption violated: psi' touches zero on the interval");
    double mu = a.mu;
    BoundCertificate cert;
    cert.theorem_tag = TheoremTag::T3_12;
    cert.decay_exponent = -mu;
    cert.regime = "all omega > 0, psi' nonvanishing on [p1,p2]";
    cert.constant = (mu == 1.0) ? (3.0 * n.sup + n.l1) / m
                                : 1.0 / mu * n.sup + (4.0 * n.sup + n.l1) / m;
    cert.ingredients = {{"sup_u", n.sup}, {"l1_du", n.l1}, {"min_dpsi", m}, {"mu", mu}};
    return cert;
}

std::pair<BoundCertificate, BoundCertificate> cone_constants_C1(const InitialDatum& d,
                                                                const Symbol& s, Interval tilde) {
    if (d.kind != DatumKind::C1 || !d.band)
        throw std::invalid_argument("cone_constants_C1 needs a C1 band datum");
    Interval band = *d.band;
    if (!(tilde.lo < band.lo && band.hi < tilde.hi))
        throw std::invalid_argument("tilde interval must strictly contain the band");
    double mu = d.mu;
    double sup = factor_sup(d.factor, band, true);
    double l1 = factor_l1_deriv(d.factor, band, true);
    double m = fpp_min(s, band);

    BoundCertificate inside;
    inside.theorem_tag = TheoremTag::T4_3_in;
    inside.decay_exponent = -mu / 2.0;
    inside.regime = "cone(" + format_double(s.fprime(tilde.lo)) + "," +
                    format_double(s.fprime(tilde.hi)) + ")";
    inside.constant = 1.0 / kTwoPi * 3.0 / mu * sup + (4.0 * sup + l1) / (kPi * m);
    inside.ingredients = {{"sup_u", sup}, {"l1_du", l1}, {"m", m}, {"mu", mu}};

    double m_hi = s.fprime(tilde.hi) - s.fprime(band.hi);
    double m_lo = s.fprime(band.lo) - s.fprime(tilde.lo);
    if (m_hi <= 0.0 || m_lo <= 0.0)
        throw std::invalid_argument("degenerate tilde interval: f' gaps not positive");
    auto half = [&](double gap) {
        return 1.0 / kTwoPi * (1.0 / mu * sup + (4.0 * sup + l1) / gap);
    };
    BoundCertificate outside;
    outside.theorem_tag = TheoremTag::T4_3_out;
    outside.decay_exponent = -mu;
    outside.regime = "complement of " + inside.regime;
    outside.constant = half(m_hi) + half(m_lo);
    outside.ingredients = {{"sup_u", sup},     {"l1_du", l1}, {"m_p2_tilde", m_hi},
                           {"m_p1_tilde", m_lo}, {"mu", mu}};
    return {inside, outside};
}

std::pair<BoundCertificate, BoundCertificate> singular_direction_constants(
    const InitialDatum& d, const Symbol& s, double epsilon, std::optional<double> eta_override) {
    if (d.kind != DatumKind::C2)
        throw std::invalid_argument("singular_direction_constants needs a C2 datum");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    double eta = eta_override.value_or(epsilon + 1.0);
    if (!(eta > epsilon)) throw std::invalid_argument("eta must exceed epsilon");
    double p1 = d.singular_point, mu = d.mu;

    auto one_sided = [&](Interval it) {
        double sup = factor_sup(d.factor, it, false);
        double l1 = factor_l1_deriv(d.factor, it, false);
        double m = fpp_min(s, it);
        return 1.0 / kTwoPi * 3.0 / mu * sup + (4.0 * sup + l1) / (kPi * m);
    };
    std::string regime = "cone(" + format_double(s.fprime(p1 - epsilon)) + "," +
                         format_double(s.fprime(p1 + epsilon)) + ")";

    BoundCertificate lead;
    lead.theorem_tag = TheoremTag::T4_7;
    lead.decay_exponent = -mu / 2.0;
    lead.regime = regime;
    lead.constant = one_sided({p1 - eta, p1}) + one_sided({p1, p1 + eta});
    lead.ingredients = {{"mu", mu}, {"eta", eta}, {"epsilon", epsilon}};

    AmpNorms g = line_norms(d);
    double m1 = s.fprime(p1 + eta) - s.fprime(p1 + epsilon);
    double m2 = s.fprime(p1 - epsilon) - s.fprime(p1 - eta);
    BoundCertificate tail;
    tail.theorem_tag = TheoremTag::T4_7;
    tail.decay_exponent = -1.0;
    tail.regime = regime;
    tail.constant = 1.0 / kTwoPi * std::pow(eta, mu - 1.0) * (4.0 * g.sup + g.l1) *
                    (1.0 / m1 + 1.0 / m2);
    tail.ingredients = {{"sup_u_line", g.sup}, {"l1_du_line", g.l1}, {"m1_eta_eps", m1},
                        {"m2_eta_eps", m2},    {"eta", eta},        {"mu", mu}};
    return {lead, tail};
}

std::array<BoundCertificate, 3> offaxis_constants(const InitialDatum& d, const Symbol& s,
                                                  Interval tilde) {
    if (d.kind != DatumKind::C2)
        throw std::invalid_argument("offaxis_constants needs a C2 datum");
    double p1 = d.singular_point;
    if (p1 >= tilde.lo && p1 <= tilde.hi)
        throw std::invalid_argument("singular point must lie strictly outside [pt1, pt2]");
    bool left_of = p1 < tilde.lo;
    double eta = 0.5 * std::min(std::abs(tilde.lo - p1), std::abs(tilde.hi - p1));
    AmpNorms g = line_norms(d);
    double mu = d.mu;
    double m1 = fpp_min(s, {tilde.lo - eta, tilde.hi + eta});
    double mt2 = s.fprime(tilde.lo) - s.fprime(tilde.lo - eta);
    double mt3 = s.fprime(tilde.hi + eta) - s.fprime(tilde.hi);
    std::string regime = "cone(" + format_double(s.fprime(tilde.lo)) + "," +
                         format_double(s.fprime(tilde.hi)) + ")";

    double dist = left_of ? tilde.lo - eta - p1 : p1 - tilde.hi - eta;
    BoundCertificate c1;
    c1.theorem_tag = TheoremTag::T4_8;
    c1.decay_exponent = -0.5;
    c1.regime = regime;
    c1.constant =
        std::pow(dist, mu - 1.0) / kPi * (g.sup + (4.0 * g.sup + g.l1) / m1);
    c1.ingredients = {{"sup_u_line", g.sup}, {"l1_du_line", g.l1}, {"m1", m1},
                      {"eta", eta},          {"dist", dist},       {"mu", mu}};

    BoundCertificate c2;
    c2.theorem_tag = TheoremTag::T4_8;
    c2.decay_exponent = -mu;
    c2.regime = regime;
    c2.constant = 1.0 / kPi *
                  (1.0 / mu * g.sup + (4.0 * g.sup + g.l1) / (left_of ? mt2 : mt3));
    c2.ingredients = {{"sup_u_line", g.sup}, {"l1_du_line", g.l1},
                      {"m_gap", left_of ? mt2 : mt3}, {"eta", eta}, {"mu", mu}};

    double far = left_of ? tilde.hi + eta - p1 : p1 - tilde.lo + eta;
    BoundCertificate c3;
    c3.theorem_tag = TheoremTag::T4_8;
    c3.decay_exponent = -1.0;
    c3.regime = regime;
    c3.constant = std::pow(far, mu - 1.0) / kTwoPi * (4.0 * g.sup + g.l1) /
                  (left_of ? mt3 : mt2);
    c3.ingredients = {{"sup_u_line", g.sup}, {"l1_du_line", g.l1},
                      {"m_gap", left_of ? mt3 : mt2}, {"eta", eta}, {"mu", mu}};
    return {c1, c2, c3};
}

LimitedGrowthConstants limited_growth_constants(const InitialDatum& d, const Symbol& s) {
    if (d.kind != DatumKind::C3 || !d.c3)
        throw std::invalid_argument("limited_growth_constants needs a C3 datum");
    if (!s.growth) throw std::invalid_argument("symbol lacks growth metadata");
    if (!s.fprime_limits) throw std::invalid_argument("symbol lacks f' limits");
    const C3Params& c = *d.c3;
    const GrowthMeta& gm = *s.growth;
    double mu = d.mu, alpha = c.alpha, bm = gm.beta_minus;
    if (!(alpha - mu > bm))
        throw std::domain_error("convergence hypothesis alpha - mu > beta- violated");
    int N = (int)std::ceil(gm.R) + 1;
    // the per-band estimates run over |n| >= N, so r <= N suffices
    if (!(c.r <= (double)N))
        throw std::domain_error("datum metadata radius r exceeds N = ceil(R)+1");
    auto [a, b] = *s.fprime_limits;
    std::string cone = "cone(" + format_double(a) + "," + format_double(b) + ")";

    auto norms_on = [&](Interval it) {
        return AmpNorms{factor_sup(d.factor, it, false), factor_l1_deriv(d.factor, it, false)};
    };
    AmpNorms nm = norms_on({-(double)N, 0.0});
    AmpNorms np = norms_on({0.0, (double)N});
    double m_m = fpp_min(s, {-(double)N, 0.0});
    double m_p = fpp_min(s, {0.0, (double)N});

    LimitedGrowthConstants out;
    out.inside_stationary.theorem_tag = TheoremTag::T5_4_in;
    out.inside_stationary.decay_exponent = -mu / 2.0;
    out.inside_stationary.regime = cone;
    out.inside_stationary.constant =
        1.0 / kTwoPi * 3.0 / mu * nm.sup + (4.0 * nm.sup + nm.l1) / (kPi * m_m) +
        1.0 / kTwoPi * 3.0 / mu * np.sup + (4.0 * np.sup + np.l1) / (kPi * m_p);
    out.inside_stationary.ingredients = {{"sup_u_minus", nm.sup}, {"l1_du_minus", nm.l1},
                                         {"sup_u_plus", np.sup},  {"l1_du_plus", np.l1},
                                         {"m_minus_N", m_m},      {"m_plus_N", m_p},
                                         {"N", (double)N},        {"mu", mu}};

    double M = c.M, Mp = c.Mprime, cm = gm.c_minus;
    out.inside_series.theorem_tag = TheoremTag::T5_4_in;
    out.inside_series.decay_exponent = -0.5;
    out.inside_series.regime = cone;
    out.inside_series.constant =
        std::pow(2.0, 2.0 - mu + alpha) * M / kPi * (alpha + 1.0 - mu) / (alpha - mu) +
        std::pow(2.0, 2.0 - mu + bm) * (std::pow(2.0, alpha + 2.0) * M + Mp) / (kPi * cm) *
            (alpha + 1.0 - mu - bm) / (alpha - mu - bm);
    out.inside_series.ingredients = {{"M", M},       {"Mprime", Mp},  {"alpha", alpha},
                                     {"beta_minus", bm}, {"c_minus", cm}, {"mu", mu}};

    double mt_m = std::min(s.fprime(-(double)N) - a, b - s.fprime(0.0));
    double mt_p = std::min(s.fprime(0.0) - a, b - s.fprime((double)N));
    if (mt_m <= 0.0 || mt_p <= 0.0)
        throw std::domain_error("assumption violated: f' gap to its limits not positive");
    out.outside_stationary.theorem_tag = TheoremTag::T5_4_out;
    out.outside_stationary.decay_exponent = -mu;
    out.outside_stationary.regime = "complement of " + cone;
    out.outside_stationary.constant =
        1.0 / kTwoPi * (1.0 / mu * nm.sup + (4.0 * nm.sup + nm.l1) / mt_m) +
        1.0 / kTwoPi * (1.0 / mu * np.sup + (4.0 * np.sup + np.l1) / mt_p);
    out.outside_stationary.ingredients = {{"sup_u_minus", nm.sup}, {"l1_du_minus", nm.l1},
                                          {"sup_u_plus", np.sup},  {"l1_du_plus", np.l1},
                                          {"mt_minus_N", mt_m},    {"mt_plus_N", mt_p},
                                          {"N", (double)N},        {"mu", mu}};

    out.outside_series.theorem_tag = TheoremTag::T5_4_out;
    out.outside_series.decay_exponent = -1.0;
    out.outside_series.regime = out.outside_stationary.regime;
    out.outside_series.constant =
        (bm - 1.0) / (kPi * cm) *
        (3.0 * std::pow(2.0, -mu + alpha + bm) * M +
         std::pow(2.0, -mu + bm) * (std::pow(2.0, alpha) * M + Mp)) *
        (alpha + 2.0 - mu - bm) / (alpha + 1.0 - mu - bm);
    out.outside_series.ingredients = out.inside_series.ingredients;
    return out;
}

VerificationReport verify_bound(const std::vector<BoundCertificate>& certs, const TruthFn& truth,
                                const std::vector<double>& grid, double slack, int workers) {
    VerificationReport rep;
    rep.quadrature_slack = slack;
    std::vector<std::optional<cplx>> vals(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) { vals[i] = truth(grid[i]); });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!vals[i]) {
            rep.excluded.push_back(grid[i]);
            continue;
        }
        double bound = 0.0;
        for (const BoundCertificate& c : certs)
            bound += c.constant * std::pow(grid[i], c.decay_exponent);
        VerificationSample s{grid[i], std::abs(*vals[i]), bound};
        rep.samples.push_back(s);
        if (bound > 0.0) rep.max_ratio = std::max(rep.max_ratio, s.truth_abs / bound);
        else if (s.truth_abs > 0.0) rep.max_ratio = std::numeric_limits<double>::infinity();
    }
    rep.all_dominated = rep.max_ratio <= 1.0 + slack;
    return rep;
}

VerificationReport verify_bound(const BoundCertificate& cert, const TruthFn& truth,
                                const std::vector<double>& grid, double slack, int workers) {
    return verify_bound(std::vector<BoundCertificate>{cert}, truth, grid, slack, workers);
}

std::string report_to_json(const VerificationReport& rep) {
    nlohmann::json j;
    j["schema"] = 1;
    j["max_ratio"] = rep.max_ratio;
    j["all_dominated"] = rep.all_dominated;
    j["quadrature_slack"] = rep.quadrature_slack;
    j["excluded"] = rep.excluded;
    nlohmann::json arr = nlohmann::json::array();
    for (const VerificationSample& s : rep.samples)
        arr.push_back({{"parameter", s.parameter},
                       {"truth_abs", s.truth_abs},
                       {"bound_value", s.bound_value}});
    j["samples"] = arr;
    return j.dump(2);
}

} // namespace oscint
