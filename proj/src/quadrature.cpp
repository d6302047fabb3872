#include "oscint/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace oscint {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss 7 / Kronrod 15 nodes and weights (positive half).
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelEval {
    cplx k15{0.0, 0.0};
    double err = 0.0;
};

template <class F>
PanelEval gk15(const F& g, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx fc = g(mid);
    cplx k = kWgk[7] * fc;
    cplx g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double dx = half * kXgk[i];
        cplx s = g(mid - dx) + g(mid + dx);
        k += kWgk[i] * s;
        if (i % 2 == 1) g7 += kWg[i / 2] * s;
    }
    return PanelEval{k * half, std::abs((k - g7) * half)};
}

struct Region {
    cplx_fn integrand;    // already transformed to local coordinates
    real_fn phase_slope;  // |d(omega psi)/dx| in local coordinates, for the cap
    double a = 0.0, b = 0.0;
};

struct Panel {
    int region = 0;
    double a = 0.0, b = 0.0;
    cplx value{0.0, 0.0};
    double err = 0.0;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.err != y.err) return x.err < y.err;
        if (x.a != y.a) return x.a < y.a;  // deterministic tie-break
        return x.region < y.region;
    }
};

// Largest sampled phase slope over a panel; a few probes are enough because
// the error-driven refinement below backstops any underestimate.
double max_slope(const Region& r, double a, double b) {
    double m = 0.0;
    for (int i = 0; i <= 4; ++i) m = std::max(m, std::abs(r.phase_slope(a + (b - a) * i / 4.0)));
    return m;
}

class Accumulator {
public:
    explicit Accumulator(const QuadOptions& opt) : opt_(opt) {}

    void push_capped(const std::vector<Region>& regions, int ri, double a, double b, int depth) {
        if (b <= a || budget_hit_) return;
        const Region& r = regions[ri];
        double lam = max_slope(r, a, b);
        if (depth < 52 && lam * (b - a) > kPi) {
            if ((long)panels_.size() >= opt_.max_panels) {
                budget_hit_ = true;
                return;
            }
            double mid = 0.5 * (a + b);
            push_capped(regions, ri, a, mid, depth + 1);
            push_capped(regions, ri, mid, b, depth + 1);
            return;
        }
        if ((long)panels_.size() >= opt_.max_panels) {
            budget_hit_ = true;
            return;
        }
        PanelEval pe = gk15(r.integrand, a, b);
        panels_.push_back(Panel{ri, a, b, pe.k15, pe.err});
    }

    // Bisect the worst panels until the summed error estimate meets tol.
    void refine(const std::vector<Region>& regions, double tol) {
        std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap(PanelWorse{}, panels_);
        cplx total{0.0, 0.0};
        double err = 0.0;
        for (const Panel& p : panels_) {
            total += p.value;
            err += p.err;
        }
        while (err > tol * (1.0 + std::abs(total)) && !heap.empty()) {
            if (heap.size() + 1 >= (std::size_t)opt_.max_panels) {
                budget_hit_ = true;
                break;
            }
            Panel worst = heap.top();
            if (worst.err <= 0.0 ||
                worst.b - worst.a < 1e-15 * std::max(1.0, std::abs(worst.a)))
                break;
            heap.pop();
            total -= worst.value;
            err -= worst.err;
            double mid = 0.5 * (worst.a + worst.b);
            const Region& r = regions[worst.region];
            for (auto [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
                PanelEval pe = gk15(r.integrand, lo, hi);
                total += pe.k15;
                err += pe.err;
                heap.push(Panel{worst.region, lo, hi, pe.k15, pe.err});
            }
        }
        // drain and re-sort so the final pairwise sum has a fixed order
        panels_.clear();
        while (!heap.empty()) {
            panels_.push_back(heap.top());
            heap.pop();
        }
        std::sort(panels_.begin(), panels_.end(), [](const Panel& x, const Panel& y) {
            if (x.region != y.region) return x.region < y.region;
            return x.a < y.a;
        });
    }

    QuadResult result(double tol) const {
        QuadResult qr;
        qr.value = pairwise_sum(0, panels_.size());
        for (const Panel& p : panels_) qr.abs_error_estimate += p.err;
        qr.panels_used = (long)panels_.size();
        qr.converged = !budget_hit_ &&
                       qr.abs_error_estimate <= tol * (1.0 + std::abs(qr.value)) * 1.0000001;
        return qr;
    }

    bool budget_hit() const { return budget_hit_; }

private:
    cplx pairwise_sum(std::size_t lo, std::size_t hi) const {
        if (hi - lo == 0) return {0.0, 0.0};
        if (hi - lo == 1) return panels_[lo].value;
        std::size_t mid = lo + (hi - lo) / 2;
        return pairwise_sum(lo, mid) + pairwise_sum(mid, hi);
    }

    QuadOptions opt_;
    std::vector<Panel> panels_;
    bool budget_hit_ = false;
};

// Builds the regions for one bounded singular amplitude: the stretch next to
// the singular endpoint goes through s = (p - p1)^mu, which removes the
// singularity exactly; the rest is direct, split at the stationary point.
std::vector<Region> make_regions(const Amplitude& a, const Phase& ph, double omega) {
    std::vector<Region> regions;
    const double lo = a.interval.lo, p2 = a.interval.hi;
    const double p1 = a.p1;
    const double mu = a.mu;
    const bool singular_at_lo = (lo == p1) && mu < 1.0;

    std::vector<double> cuts;
    if (ph.stationary) {
        double p0 = ph.stationary->p0;
        if (p0 > lo && p0 < p2) cuts.push_back(p0);
    }
    cuts.push_back(p2);

    double left = lo;
    bool first = true;
    for (double cut : cuts) {
        if (cut <= left) continue;
        Region r;
        if (first && singular_at_lo) {
            r.a = 0.0;
            r.b = std::pow(cut - p1, mu);
            r.integrand = [&a, &ph, omega, p1, mu](double s) {
                double p = p1 + std::pow(s, 1.0 / mu);
                return (1.0 / mu) * a.factor.eval(p) * std::polar(1.0, omega * ph.eval(p));
            };
            r.phase_slope = [&ph, omega, p1, mu](double s) {
                if (s <= 0.0) return 0.0;
                double p = p1 + std::pow(s, 1.0 / mu);
                return omega * std::abs(ph.deriv(p)) * (1.0 / mu) *
                       std::pow(s, 1.0 / mu - 1.0);
            };
        } else {
            r.a = left;
            r.b = cut;
            if (mu == 1.0) {
                r.integrand = [&a, &ph, omega](double p) {
                    return a.factor.eval(p) * std::polar(1.0, omega * ph.eval(p));
                };
            } else {
                r.integrand = [&a, &ph, omega, p1, mu](double p) {
                    return std::pow(std::abs(p - p1), mu - 1.0) * a.factor.eval(p) *
                           std::polar(1.0, omega * ph.eval(p));
                };
            }
            r.phase_slope = [&ph, omega](double p) { return omega * std::abs(ph.deriv(p)); };
        }
        regions.push_back(std::move(r));
        left = cut;
        first = false;
    }
    return regions;
}

void check_tol(double tol) {
    if (!(tol > 1e-14 && tol < 1e-2))
        throw std::invalid_argument("quadrature tolerance must lie in (1e-14, 1e-2)");
}

// ---- truncation of improper integrals ------------------------------------

double static_tail_radius(const InitialDatum& d, double tol) {
    // smallest P with the majorant integral over |p| > P below tol/2
    if (d.kind == DatumKind::C3 && d.c3) {
        const C3Params& c = *d.c3;
        return std::pow(tol * (c.alpha - d.mu) / (4.0 * c.M), 1.0 / (d.mu - c.alpha));
    }
    if (d.tail) {
        const TailMajorant& t = *d.tail;
        if (t.beta <= 1.0) throw std::domain_error("tail majorant must be integrable (beta > 1)");
        double P = std::pow(tol * (t.beta - 1.0) / (4.0 * t.A), 1.0 / (1.0 - t.beta));
        return std::max(P, t.p_min);
    }
    throw std::domain_error("improper integral needs decay metadata (missing majorant)");
}

double static_tail_value(const InitialDatum& d, double P) {
    if (d.kind == DatumKind::C3 && d.c3)
        return 2.0 * d.c3->M * std::pow(P, d.mu - d.c3->alpha) / (d.c3->alpha - d.mu);
    const TailMajorant& t = *d.tail;
    return 2.0 * t.A * std::pow(P, 1.0 - t.beta) / (t.beta - 1.0);
}

// Stationary-point-free estimate of the whole tail |p| >= P, summed band by
// band over [n, n+1] with the regular-amplitude constant; each band decays
// like omega^{-1}.  Returns +inf when the metadata or the phase do not
// support the estimate.
double banded_tail_bound(const InitialDatum& d, const Phase& ph, double omega, int P) {
    const double inf = std::numeric_limits<double>::infinity();
    if (!d.c3 || omega <= 0.0) return inf;
    // The per-band minimum of |psi'| is taken at the band endpoints and the
    // summation remainder assumes |psi'| does not shrink further out; both
    // hold for drift phases (f' monotone) around a declared stationary point
    // or with a declared positive slope floor, and for the power phases.
    if (!ph.stationary && !(ph.min_slope > 0.0)) return inf;
    const C3Params& c = *d.c3;
    double sigma = c.alpha + 1.0 - d.mu;
    if (sigma <= 1.0) return inf;
    // on bands with |n| >= max(2, 4|p1|): |p - p1| >= |n|/4 and |p| >= |n|/2
    double amp = std::pow(4.0, 1.0 - d.mu) * (std::pow(2.0, c.alpha + 2.0) * c.M + c.Mprime);
    double p0 = ph.stationary ? ph.stationary->p0 : 0.0;

    double bound = 0.0;
    for (int side = 0; side < 2; ++side) {
        double last_term = 0.0, last_m = 0.0;
        double n_stop = P;
        for (int k = 0; k < 4096; ++k) {
            int n = side == 0 ? P + k : -P - 1 - k;
            double lo = n, hi = n + 1.0;
            if (ph.stationary && p0 >= lo - 0.5 && p0 <= hi + 0.5) return inf;
            double da = ph.deriv(lo), db = ph.deriv(hi);
            if (da * db <= 0.0) return inf;  // sign change: psi' vanishes inside
            double m = std::min(std::abs(da), std::abs(db));
            if (m <= 0.0) return inf;
            double term = amp * std::pow(std::abs((double)n), -sigma) / m;
            bound += term;
            last_term = term;
            last_m = m;
            n_stop = std::abs((double)n);
            if (term < 1e-22 * std::max(1.0, bound)) break;
        }
        // integral-comparison remainder; with only a slope floor, |psi'| may
        // still shrink toward its limit, so rescale by the floor
        double floor_scale = ph.stationary ? 1.0 : last_m / ph.min_slope;
        bound += last_term * floor_scale * n_stop / (sigma - 1.0);
    }
    return bound / omega;
}

int truncation_radius(const InitialDatum& d, const Phase& ph, double omega, double tol) {
    double p_static = static_tail_radius(d, tol);
    int p_min = std::max(2, (int)std::ceil(4.0 * std::abs(d.singular_point)) + 1);
    if (d.c3) p_min = std::max(p_min, (int)std::ceil(d.c3->r));
    if (ph.stationary) p_min = std::max(p_min, (int)std::ceil(std::abs(ph.stationary->p0)) + 1);
    if (d.tail) p_min = std::max(p_min, (int)std::ceil(d.tail->p_min));
    int p_cap = (int)std::ceil(std::max(p_static, (double)p_min));
    if (p_cap <= p_min) return p_min;
    // the band bound decreases with P: binary-search the smallest adequate P
    if (banded_tail_bound(d, ph, omega, p_cap - 1) > tol / 2.0) return p_cap;
    int lo = p_min, hi = p_cap - 1;
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (banded_tail_bound(d, ph, omega, mid) <= tol / 2.0)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

Phase reflect_phase(const Phase& ph, double s0) {
    Phase out;
    out.eval = [e = ph.eval, s0](double q) { return e(s0 - q); };
    out.deriv = [dv = ph.deriv, s0](double q) { return -dv(s0 - q); };
    out.domain = {s0 - ph.domain.hi, s0 - ph.domain.lo};
    out.min_slope = ph.min_slope;
    if (ph.stationary) {
        double q0 = s0 - ph.stationary->p0, rho = ph.stationary->rho;
        out.stationary = StationaryPoint{q0, rho};
        out.nonvanishing_factor = [dv = ph.deriv, s0, q0, rho](double q) {
            double dist = std::abs(q - q0);
            if (dist < 1e-300) return 1.0;  // never sampled: integrals split at q0
            return -dv(s0 - q) / std::pow(dist, rho - 1.0);
        };
    }
    return out;
}

} // namespace

QuadResult oscillatory_integral(const Amplitude& a, const Phase& ph, double omega, double tol,
                                const QuadOptions& opt) {
    check_tol(tol);
    if (!(omega > 0.0)) throw std::invalid_argument("oscillatory_integral needs omega > 0");
    std::vector<Region> regions = make_regions(a, ph, omega);
    Accumulator acc(opt);
    for (std::size_t i = 0; i < regions.size(); ++i)
        acc.push_capped(regions, (int)i, regions[i].a, regions[i].b, 0);
    if (!acc.budget_hit()) acc.refine(regions, tol);
    return acc.result(tol);
}

QuadResult improper_oscillatory_integral(const InitialDatum& d, const Phase& ph, double omega,
                                         double tol, const QuadOptions& opt) {
    check_tol(tol);
    if (d.kind == DatumKind::C1)
        throw std::invalid_argument("improper integral expects a C2 or C3 datum");
    if (!d.c3 && !d.tail)
        throw std::domain_error("improper integral needs decay metadata (missing majorant)");

    double om = std::max(omega, 1e-300);
    int P = truncation_radius(d, ph, om, tol);
    double s0 = d.singular_point;
    double tail_err = std::min(static_tail_value(d, P), banded_tail_bound(d, ph, om, P));

    // right half [s0, P] and reflected left half [-P, s0]
    Amplitude right;
    right.p1 = s0;
    right.mu = d.mu;
    right.factor = d.factor;
    right.interval = {s0, (double)P};

    Amplitude left;
    left.p1 = 0.0;
    left.mu = d.mu;
    left.factor.eval = [f = d.factor.eval, s0](double q) { return f(s0 - q); };
    left.factor.deriv = [g = d.factor.deriv, s0](double q) { return -g(s0 - q); };
    left.interval = {0.0, s0 + (double)P};
    Phase left_phase = reflect_phase(ph, s0);

    QuadOptions half = opt;
    half.max_panels = opt.max_panels / 2;
    QuadResult r1 = oscillatory_integral(right, ph, om, tol / 2.0, half);
    QuadResult r2 = oscillatory_integral(left, left_phase, om, tol / 2.0, half);

    QuadResult qr;
    qr.value = r1.value + r2.value;
    qr.abs_error_estimate = r1.abs_error_estimate + r2.abs_error_estimate + tail_err;
    qr.panels_used = r1.panels_used + r2.panels_used;
    qr.converged = r1.converged && r2.converged &&
                   qr.abs_error_estimate <= tol * (1.0 + std::abs(qr.value)) * 1.0000001;
    return qr;
}

// ---- norms ----------------------------------------------------------------

namespace {

// golden-section maximization; returns the best value of h on [a, b]
template <class F>
double golden_max(const F& h, double a, double b) {
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double hc = h(c), hd = h(d);
    for (int i = 0; i < 80 && (b - a) > 1e-14 * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
        if (hc < hd) {
            a = c;
            c = d;
            hc = hd;
            d = a + gr * (b - a);
            hd = h(d);
        } else {
            b = d;
            d = c;
            hd = hc;
            c = b - gr * (b - a);
            hc = h(c);
        }
    }
    return std::max(hc, hd);
}

// Sampled extremum of |g|: 1025 Chebyshev nodes, then golden-section around
// the five best local candidates.
template <class G>
double extremum_abs(const G& absg, Interval it, bool maximize) {
    const int n = 1024;
    double mid = 0.5 * (it.lo + it.hi), half = 0.5 * (it.hi - it.lo);
    std::vector<double> xs(n + 1), vs(n + 1);
    for (int k = 0; k <= n; ++k) {
        xs[k] = mid + half * std::cos(kPi * k / n);  // descending in k
        vs[k] = absg(xs[k]);
    }
    double sign = maximize ? 1.0 : -1.0;
    std::vector<int> cand;
    for (int k = 0; k <= n; ++k) {
        if (k > 0 && sign * vs[k] < sign * vs[k - 1]) continue;
        if (k < n && sign * vs[k] < sign * vs[k + 1]) continue;
        cand.push_back(k);
    }
    std::sort(cand.begin(), cand.end(),
              [&](int i, int j) { return sign * vs[i] > sign * vs[j]; });
    if (cand.size() > 5) cand.resize(5);
    double best = vs[0];
    for (double v : vs) best = maximize ? std::max(best, v) : std::min(best, v);
    for (int k : cand) {
        double lo = xs[std::min(n, k + 1)];
        double hi = xs[std::max(0, k - 1)];
        double refined = sign * golden_max([&](double x) { return sign * absg(x); }, lo, hi);
        best = maximize ? std::max(best, refined) : std::min(best, refined);
    }
    return best;
}

} // namespace

double sup_norm(const cplx_fn& g, Interval it) {
    return extremum_abs([&](double p) { return std::abs(g(p)); }, it, true) * (1.0 + 1e-6);
}

double sup_norm(const real_fn& g, Interval it) {
    return extremum_abs([&](double p) { return std::abs(g(p)); }, it, true) * (1.0 + 1e-6);
}

double min_abs(const real_fn& g, Interval it) {
    return extremum_abs([&](double p) { return std::abs(g(p)); }, it, false) * (1.0 - 1e-6);
}

double l1_norm(const cplx_fn& g, Interval it) {
    struct RPanel {
        double a, b, value, err;
    };
    auto eval = [&](double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double fc = std::abs(g(mid));
        double k = kWgk[7] * fc, g7 = kWg[3] * fc;
        for (int i = 0; i < 7; ++i) {
            double dx = half * kXgk[i];
            double s = std::abs(g(mid - dx)) + std::abs(g(mid + dx));
            k += kWgk[i] * s;
            if (i % 2 == 1) g7 += kWg[i / 2] * s;
        }
        return RPanel{a, b, k * half, std::abs(k - g7) * half};
    };
    auto cmp = [](const RPanel& x, const RPanel& y) {
        if (x.err != y.err) return x.err < y.err;
        return x.a < y.a;
    };
    std::priority_queue<RPanel, std::vector<RPanel>, decltype(cmp)> heap(cmp);
    const int n0 = 16;
    double total = 0.0, err = 0.0;
    for (int i = 0; i < n0; ++i) {
        RPanel p = eval(it.lo + it.length() * i / n0, it.lo + it.length() * (i + 1) / n0);
        total += p.value;
        err += p.err;
        heap.push(p);
    }
    int guard = 200000;
    while (err > 1e-8 * std::max(1e-300, total) && guard-- > 0) {
        RPanel w = heap.top();
        if (w.err <= 0.0 || w.b - w.a < 1e-14 * std::max(1.0, std::abs(w.a))) break;
        heap.pop();
        total -= w.value;
        err -= w.err;
        double mid = 0.5 * (w.a + w.b);
        for (auto [lo, hi] : {std::pair{w.a, mid}, std::pair{mid, w.b}}) {
            RPanel p = eval(lo, hi);
            total += p.value;
            err += p.err;
            heap.push(p);
        }
    }
    return total;
}

double factor_sup(const RegularFactor& rf, Interval it, bool whole) {
    if (whole && rf.analytic_sup) return *rf.analytic_sup;
    return sup_norm(rf.eval, it);
}

double factor_l1_deriv(const RegularFactor& rf, Interval it, bool whole) {
    if (whole && rf.analytic_l1_deriv) return *rf.analytic_l1_deriv;
    return l1_norm(rf.deriv, it);
}

} // namespace oscint
