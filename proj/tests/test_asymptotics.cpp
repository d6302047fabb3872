#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oscint/asymptotics.hpp"
#include "oscint/gammafn.hpp"
#include "oscint/util.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace oscint;

namespace {

Phase square_phase() {
    Phase ph;
    ph.eval = [](double p) { return p * p; };
    ph.deriv = [](double p) { return 2.0 * p; };
    ph.stationary = StationaryPoint{0.0, 2.0};
    ph.nonvanishing_factor = [](double p) { return p < 0 ? -2.0 : 2.0; };
    ph.domain = {-1e300, 1e300};
    return ph;
}

Phase linear_phase() {
    Phase ph;
    ph.eval = [](double p) { return p; };
    ph.deriv = [](double) { return 1.0; };
    ph.domain = {-1e300, 1e300};
    ph.min_slope = 1.0;
    return ph;
}

} // namespace

TEST_CASE("gamma function values") {
    const double sqrt_pi = 1.7724538509055160273;
    CHECK(std::abs(gamma_fn(0.5) - sqrt_pi) <= 1e-12 * sqrt_pi);
    CHECK(std::abs(gamma_fn(1.0) - 1.0) <= 1e-12);
    CHECK(std::abs(gamma_fn(0.25) - 3.6256099082219083119) <= 1e-12 * 3.63);
    CHECK(std::abs(gamma_fn(1.0 / 12.0) - 11.499428186073990664) <= 1e-11 * 11.5);
    CHECK(std::abs(gamma_fn(1.0 / 3.0) - 2.6789385347077476337) <= 1e-12 * 2.68);
    for (double z : {0.25, 0.5, 1.0, 1.5}) {
        CHECK(std::abs(gamma_fn(z + 1.0) - z * gamma_fn(z)) <= 1e-12 * gamma_fn(z + 1.0));
    }
}

TEST_CASE("interior leading term") {
    // mu=0.5, rho=2, psi=p^2 (psi~=2), u~=1: modulus Gamma(1/4)/2
    Amplitude a{0.0, 0.5, make_const_factor(1.0), {0.0, 1.0}};
    LeadingTerm lt = leading_term_interior(a, square_phase());
    CHECK(lt.exponent == doctest::Approx(-0.25));
    CHECK(lt.coefficient_modulus == doctest::Approx(1.8128049541109542).epsilon(1e-10));

    // mu=1: sqrt(pi)/2, the classical half-line Fresnel coefficient
    Amplitude b{0.0, 1.0, make_const_factor(1.0), {0.0, 1.0}};
    LeadingTerm lt1 = leading_term_interior(b, square_phase());
    CHECK(lt1.coefficient_modulus == doctest::Approx(0.8862269254527580).epsilon(1e-10));
    CHECK(lt1.exponent == doctest::Approx(-0.5));

    // zero factor: modulus zero at mu=1 (degenerate but defined)
    Amplitude z{0.0, 1.0, make_const_factor(0.0), {0.0, 1.0}};
    z.factor.analytic_sup = 0.0;
    CHECK(leading_term_interior(z, square_phase()).coefficient_modulus == 0.0);

    // mu<1 with vanishing factor at p1 is degenerate
    Amplitude bad{0.0, 0.5, make_const_factor(0.0), {0.0, 1.0}};
    CHECK_THROWS_AS(leading_term_interior(bad, square_phase()), std::domain_error);

    // p0 != p1 violates the precondition
    Phase off = make_power_phase(0.5, 2.0);
    CHECK_THROWS_AS(leading_term_interior(a, off), std::invalid_argument);
}

TEST_CASE("interior leading term against brute force at omega = 1e6") {
    // |int_0^1 e^{i w p^2} dp| * w^{1/2} -> sqrt(pi)/2
    double w = 1e6;
    cplx oracle = testoracle::composite_simpson(
        [w](double p) { return std::polar(1.0, w * p * p); }, 0.0, 1.0, 67108864);
    CHECK(std::abs(oracle) * std::sqrt(w) == doctest::Approx(0.8862269254527580).epsilon(2e-3));
}

TEST_CASE("endpoint terms without stationary point") {
    Amplitude a{0.0, 0.5, make_const_factor(1.0), {0.0, 1.0}};
    auto [first, second] = leading_term_nostat(a, linear_phase());
    CHECK(first.exponent == doctest::Approx(-0.5));
    CHECK(first.coefficient_modulus == doctest::Approx(1.7724538509055160).epsilon(1e-10));
    CHECK(second.exponent == doctest::Approx(-1.0));
    CHECK(second.coefficient_modulus == doctest::Approx(1.0).epsilon(1e-10));

    // brute-force cross-check: |int_0^1 p^{-1/2} e^{i w p} dp| w^{1/2} -> sqrt(pi)
    double w = 1e6;
    cplx oracle = testoracle::composite_sqrt_singular(
        [](double) { return cplx(1.0); }, [](double p) { return p; }, 0.0, 1.0, w, 33554432);
    CHECK(std::abs(oracle) * std::sqrt(w) == doctest::Approx(1.7724538509055160).epsilon(5e-3));

    // mu=1: both endpoint contributions carry omega^{-1}
    Amplitude b{0.0, 1.0, make_const_factor(1.0), {0.0, 1.0}};
    auto [f1, s1] = leading_term_nostat(b, linear_phase());
    CHECK(f1.exponent == doctest::Approx(-1.0));
    CHECK(f1.coefficient_modulus == doctest::Approx(1.0));
    CHECK(s1.coefficient_modulus == doctest::Approx(1.0));

    // vanishing factor at p1 with mu=1: first term drops out
    Amplitude z{0.0, 1.0, make_poly_factor({0.0, 1.0}), {0.0, 1.0}};
    auto [fz, sz] = leading_term_nostat(z, linear_phase());
    CHECK(fz.coefficient_modulus == 0.0);
    CHECK(sz.coefficient_modulus == doctest::Approx(1.0));
}

TEST_CASE("fit_decay on exact power laws") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 20; ++i) {
        double x = std::pow(10.0, 0.2 * i);
        pts.emplace_back(x, 5.0 * std::pow(x, -0.25));
    }
    DecayFit fit = fit_decay(pts);
    CHECK(std::abs(fit.slope + 0.25) <= 1e-12);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<std::pair<double, double>> flat;
    for (int i = 0; i < 10; ++i) flat.emplace_back(std::pow(10.0, 0.3 * i), 7.0);
    CHECK(std::abs(fit_decay(flat).slope) <= 1e-12);

    CHECK_THROWS_AS(fit_decay({{1.0, 0.0}, {2.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("envelope fitting handles oscillatory nulls") {
    // y = |(e^{ix} - 1)/x|: nulls at multiples of 2 pi, envelope 2/x.
    // Full decades of samples so every bucket catches a near-peak.
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 240 * 4; ++i) {
        double x = std::pow(10.0, 2.0 + (double)i / 240.0);
        pts.emplace_back(x, std::abs(std::polar(1.0, x) - cplx(1.0)) / x);
    }
    DecayFit fit = fit_decay(decade_envelope(pts));
    CHECK(std::abs(fit.slope + 1.0) <= 0.02);
}

TEST_CASE("optimality ratios") {
    Amplitude a{0.0, 0.5, make_const_factor(1.0), {0.0, 1.0}};
    auto rat = optimality_ratio(a, square_phase(), {1e6}, 1e-8);
    REQUIRE(rat.size() == 1);
    CHECK(rat[0].second == doctest::Approx(1.0).epsilon(0.05));

    // amplitude scaling leaves the ratio unchanged
    Amplitude a3{0.0, 0.5, make_const_factor(3.0), {0.0, 1.0}};
    auto rat3 = optimality_ratio(a3, square_phase(), {1e6}, 1e-8);
    CHECK(rat3[0].second == doctest::Approx(rat[0].second).epsilon(1e-8));
}
