#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oscint/quadrature.hpp"
#include "oscint/util.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace oscint;

namespace {

Phase linear_phase() {
    Phase ph;
    ph.eval = [](double p) { return p; };
    ph.deriv = [](double) { return 1.0; };
    ph.domain = {-1e300, 1e300};
    ph.min_slope = 1.0;
    return ph;
}

Phase square_phase() {
    Phase ph;
    ph.eval = [](double p) { return p * p; };
    ph.deriv = [](double p) { return 2.0 * p; };
    ph.stationary = StationaryPoint{0.0, 2.0};
    ph.nonvanishing_factor = [](double p) { return p < 0 ? -2.0 : 2.0; };
    ph.domain = {-1e300, 1e300};
    return ph;
}

} // namespace

TEST_CASE("closed form: unit amplitude, linear phase") {
    Amplitude a{0.0, 1.0, make_const_factor(1.0), {0.0, 1.0}};
    QuadResult qr = oscillatory_integral(a, linear_phase(), 3.14159265358979323846, 1e-10);
    CHECK(qr.converged);
    // (e^{i pi} - 1) / (i pi) = 2i/pi
    CHECK(std::abs(qr.value) == doctest::Approx(0.6366197723675814).epsilon(1e-9));
    CHECK(qr.value.imag() == doctest::Approx(0.6366197723675814).epsilon(1e-9));
    CHECK(qr.value.real() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("vanishing oscillation recovers the singular integral") {
    Amplitude a{0.0, 0.5, make_const_factor(1.0), {0.0, 1.0}};
    QuadResult qr = oscillatory_integral(a, square_phase(), 1e-9, 1e-10);
    CHECK(qr.converged);
    CHECK(qr.value.real() == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(qr.value.imag() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("oracle agreement at omega = 50 for the square phase") {
    Amplitude a{0.0, 1.0, make_const_factor(1.0), {0.0, 1.0}};
    QuadResult qr = oscillatory_integral(a, square_phase(), 50.0, 1e-10);
    cplx oracle = testoracle::composite_simpson(
        [](double p) { return std::polar(1.0, 50.0 * p * p); }, 0.0, 1.0, 10000000);
    CHECK(qr.converged);
    CHECK(std::abs(qr.value - oracle) <= 1e-8);
}

TEST_CASE("oracle agreement on random smooth amplitudes") {
    Rng rng(77001u);
    for (int trial = 0; trial < 20; ++trial) {
        double c0 = rng.uniform(-1.0, 1.0), c1 = rng.uniform(-1.0, 1.0);
        double w = std::pow(10.0, rng.uniform(0.0, 3.0));
        double k = rng.uniform(0.5, 2.0);
        Amplitude a{0.0, 1.0, make_poly_factor({c0, c1}), {0.0, 1.0}};
        Phase ph;
        ph.eval = [k](double p) { return k * p * p; };
        ph.deriv = [k](double p) { return 2.0 * k * p; };
        ph.stationary = StationaryPoint{0.0, 2.0};
        ph.nonvanishing_factor = [k](double p) { return p < 0 ? -2.0 * k : 2.0 * k; };
        ph.domain = {-1e300, 1e300};
        QuadResult qr = oscillatory_integral(a, ph, w, 1e-10);
        cplx oracle = testoracle::composite_simpson(
            [&](double p) { return (c0 + c1 * p) * std::polar(1.0, w * k * p * p); }, 0.0, 1.0,
            2000000);
        CHECK(qr.converged);
        CHECK(std::abs(qr.value - oracle) <= 1e-8);
    }
}

TEST_CASE("conjugation, linearity, and phase-shift invariances") {
    Rng rng(88111u);
    for (int trial = 0; trial < 100; ++trial) {
        double c0 = rng.uniform(-1.0, 1.0), c1 = rng.uniform(-1.0, 1.0);
        double d0 = rng.uniform(-1.0, 1.0), d1 = rng.uniform(-1.0, 1.0);
        double w = std::pow(10.0, rng.uniform(-1.0, 2.5));
        double al = rng.uniform(-2.0, 2.0), be = rng.uniform(-2.0, 2.0);
        double shift = rng.uniform(-3.0, 3.0);
        Amplitude a1{0.0, 1.0, make_poly_factor({c0, c1}), {0.0, 1.0}};
        Amplitude a2{0.0, 1.0, make_poly_factor({d0, d1}), {0.0, 1.0}};
        Amplitude mix{0.0, 1.0, make_poly_factor({al * c0 + be * d0, al * c1 + be * d1}),
                      {0.0, 1.0}};
        Phase ph = square_phase();
        double tol = 1e-10;
        cplx i1 = oscillatory_integral(a1, ph, w, tol).value;
        cplx i2 = oscillatory_integral(a2, ph, w, tol).value;
        cplx imix = oscillatory_integral(mix, ph, w, tol).value;
        CHECK(std::abs(imix - (al * i1 + be * i2)) <= 1e-8 * (1.0 + std::abs(imix)));

        // conjugation: psi -> -psi with conjugated amplitude conjugates the value
        Phase neg;
        neg.eval = [](double p) { return -p * p; };
        neg.deriv = [](double p) { return -2.0 * p; };
        neg.stationary = StationaryPoint{0.0, 2.0};
        neg.nonvanishing_factor = [](double p) { return p < 0 ? 2.0 : -2.0; };
        neg.domain = {-1e300, 1e300};
        cplx ic = oscillatory_integral(a1, neg, w, tol).value;
        CHECK(std::abs(ic - std::conj(i1)) <= 1e-8 * (1.0 + std::abs(i1)));

        // adding a constant to psi rotates the value, modulus unchanged
        Phase shifted;
        shifted.eval = [shift](double p) { return p * p + shift; };
        shifted.deriv = [](double p) { return 2.0 * p; };
        shifted.stationary = StationaryPoint{0.0, 2.0};
        shifted.nonvanishing_factor = [](double p) { return p < 0 ? -2.0 : 2.0; };
        shifted.domain = {-1e300, 1e300};
        cplx is = oscillatory_integral(a1, shifted, w, tol).value;
        CHECK(std::abs(is - i1 * std::polar(1.0, w * shift)) <= 1e-8 * (1.0 + std::abs(i1)));
        CHECK(std::abs(std::abs(is) - std::abs(i1)) <= 1e-8 * (1.0 + std::abs(i1)));
    }
}

TEST_CASE("power mean inequality behind the interval splits") {
    // x^mu - y^mu <= (x-y)^mu for x >= y >= 0, mu in (0,1]
    Rng rng(55021u);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        double x = rng.uniform(0.0, 100.0);
        double y = x * rng.unit();
        double mu = rng.uniform(1e-6, 1.0);
        if (std::pow(x, mu) - std::pow(y, mu) > std::pow(x - y, mu) * (1.0 + 1e-12) + 1e-300)
            ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("improper integral: truncation radius and zero amplitude") {
    InitialDatum d = make_c3_example_datum(0.5, 4.0);
    // P = (tol (alpha-mu) / (4 M))^(1/(mu-alpha)) ~ 53.9 at tol 1e-6,
    // cross-checked against numeric integration of the majorant tail
    double tol = 1e-6;
    double P = std::pow(tol * 3.5 / 4.0, 1.0 / (0.5 - 4.0));
    CHECK(P == doctest::Approx(53.9).epsilon(2e-3));
    double tail = 0.0;  // numeric tail of 2 M p^(mu-1-alpha) from P upward
    for (int i = 0; i < 2000000; ++i) {
        double p = P + (double)i * 0.01 + 0.005;
        tail += 2.0 * std::pow(p, 0.5 - 1.0 - 4.0) * 0.01;
    }
    CHECK(tail <= tol / 2.0 * 1.01);
    CHECK(tail >= tol / 2.0 * 0.9);

    InitialDatum zero = d;
    zero.factor = make_const_factor(0.0);
    zero.factor.analytic_sup = 0.0;
    Phase ph;
    ph.eval = [](double p) { return -p * p; };
    ph.deriv = [](double p) { return -2.0 * p; };
    ph.stationary = StationaryPoint{0.0, 2.0};
    ph.nonvanishing_factor = [](double p) { return p < 0 ? 2.0 : -2.0; };
    ph.domain = {-1e300, 1e300};
    QuadResult qr = improper_oscillatory_integral(zero, ph, 1.0, 1e-6);
    CHECK(std::abs(qr.value) == doctest::Approx(0.0));
}

TEST_CASE("improper integral matches a brute-force oracle") {
    InitialDatum d = make_c3_example_datum(0.5, 4.0);
    Phase ph;  // drift phase of the free particle at v = 0: psi = -p^2
    ph.eval = [](double p) { return -p * p; };
    ph.deriv = [](double p) { return -2.0 * p; };
    ph.stationary = StationaryPoint{0.0, 2.0};
    ph.nonvanishing_factor = [](double p) { return p < 0 ? 2.0 : -2.0; };
    ph.domain = {-1e300, 1e300};
    double omega = 1000.0;
    QuadOptions opt;
    opt.max_panels = 2000000;
    QuadResult qr = improper_oscillatory_integral(d, ph, omega, 1e-7, opt);
    CHECK(qr.converged);

    auto ut = [](double p) {
        double q = 1.0 + p * p;
        return cplx(1.0 / (q * q));
    };
    auto psi = [](double p) { return -p * p; };
    // symmetric datum and even phase: the two halves coincide
    cplx oracle = 2.0 * testoracle::composite_sqrt_singular(ut, psi, 0.0, 200.0, omega, 60000000);
    CHECK(std::abs(qr.value - oracle) <= 1e-6);
}

TEST_CASE("missing majorant is an error") {
    InitialDatum d;
    d.kind = DatumKind::C2;
    d.mu = 0.5;
    d.factor = make_inverse_power_factor(4.0);
    CHECK_THROWS_AS(improper_oscillatory_integral(d, linear_phase(), 1.0, 1e-6),
                    std::domain_error);
}

TEST_CASE("tolerance validation and panel budget") {
    Amplitude a{0.0, 1.0, make_const_factor(1.0), {0.0, 1.0}};
    CHECK_THROWS_AS(oscillatory_integral(a, linear_phase(), 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(oscillatory_integral(a, linear_phase(), 1.0, 1e-15), std::invalid_argument);

    QuadOptions tiny;
    tiny.max_panels = 32;
    QuadResult qr = oscillatory_integral(a, square_phase(), 1e6, 1e-8, tiny);
    CHECK(!qr.converged);
}

TEST_CASE("sup, min, and L1 estimators") {
    CHECK(sup_norm(real_fn([](double p) { return p; }), {0.0, 1.0}) ==
          doctest::Approx(1.0).epsilon(1e-5));
    CHECK(sup_norm(real_fn([](double p) { return std::sin(10.0 * p); }), {0.0, 1.0}) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sup_norm(cplx_fn([](double p) { return cplx(std::pow(1.0 + p * p, -2.0)); }),
                   {-3.0, 3.0}) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(min_abs([](double) { return 2.0; }, {0.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-6));
    Symbol kg = make_klein_gordon_symbol(1.0);
    CHECK(min_abs(kg.fsecond, {0.0, 1.0}) ==
          doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-6));

    CHECK(l1_norm(cplx_fn([](double) { return cplx(1.0); }), {0.0, 1.0}) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(l1_norm(cplx_fn([](double p) { return cplx(2.0 * p); }), {0.0, 1.0}) ==
          doctest::Approx(1.0).epsilon(1e-8));
    // derivative of (1+p^2)^-1 over [-10,10]: total variation 2 (1 - 1/101)
    CHECK(l1_norm(cplx_fn([](double p) {
              return cplx(-2.0 * p / ((1.0 + p * p) * (1.0 + p * p)));
          }),
          {-10.0, 10.0}) == doctest::Approx(1.9801980198019802).epsilon(1e-8));
}
