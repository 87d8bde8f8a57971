#include "doctest.h"

#include "support.hpp"

#include "oscbath/errors.hpp"
#include "oscbath/spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace oscbath;
using testing_support::s0_chi;

namespace {

constexpr double pi = std::numbers::pi;

// Cauchy integral  int_0^inf w gamma(w) / (z^2 - w^2) dw  by adaptive quadrature
// on the compactified variable w = x / (1 - x).
template <class G>
cplx cauchy_oracle(const G& gamma, cplx z, double upper = 0.0, double piece = 0.0) {
    auto integrand = [&](double x, bool im) {
        const double w = upper > 0 ? x : x / (1.0 - x);
        const double jac = upper > 0 ? 1.0 : 1.0 / ((1.0 - x) * (1.0 - x));
        const cplx v = w * gamma(w) / (z * z - w * w) * jac;
        return im ? v.imag() : v.real();
    };
    using boost::math::quadrature::gauss_kronrod;
    // integrate piecewise so that kinks of tabulated data sit on interval ends
    const double b = upper > 0 ? upper : 1.0;
    const double step = piece > 0 ? piece : b;
    cplx total = 0.0;
    for (double a = 0.0; a < b - 1e-12; a += step) {
        const double e = std::min(a + step, b);
        total += cplx(gauss_kronrod<double, 61>::integrate([&](double x) { return integrand(x, false); }, a, e, 15, 1e-14),
                      gauss_kronrod<double, 61>::integrate([&](double x) { return integrand(x, true); }, a, e, 15, 1e-14));
    }
    return total;
}

} // namespace

TEST_CASE("drude gamma values") {
    const auto g = SpectralDensity::drude(0.1, 10.0);
    CHECK(gamma_eval(g, 0.0) == 0.0);
    CHECK(gamma_eval(g, 1e8) < 1e-7);
    CHECK(gamma_eval(g, 1e8) * 1e8 == doctest::Approx(2.0 / pi * 0.1 * 100.0).epsilon(1e-10));
    const double expected = 2.0 / pi * 0.1 * 10.0 * (100.0 / 200.0);
    CHECK(gamma_eval(g, 10.0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(gamma_eval(g, 10.0) == doctest::Approx(0.3183098861837907).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_eval(g, -1.0), DomainError);
    CHECK_THROWS_AS(SpectralDensity::drude(-0.1, 10.0), DomainError);
}

TEST_CASE("drude continuation agrees with the Cauchy integral") {
    const auto g = SpectralDensity::drude(0.1, 10.0);
    // the raw Cauchy integral differs from the closed form by the constant
    // Gamma(i0+) - C(i0+) = int gamma/w = kappa wc; only differences enter F
    const double shift = g.inverse_moment();
    CHECK(shift == doctest::Approx(1.0));
    for (cplx z : {cplx(0.0, 1e-6), cplx(1.0, 0.5), cplx(-3.0, 2.0), cplx(25.0, 0.1)}) {
        const cplx c = cauchy_oracle(g, z);
        CHECK(std::abs(c + shift - gamma_continuation(g, z)) < 1e-10);
    }
    CHECK(std::abs(gamma_continuation(g, cplx(0.0, 1e-6))) < 1e-6);
    CHECK(g.at_zero() == 0.0);
    CHECK_THROWS_AS(gamma_continuation(g, cplx(1.0, 0.0)), DomainError);
    for (double w = 0.05; w < 60.0; w *= 1.3)
        CHECK(g.boundary(w).imag() == doctest::Approx(-pi / 2 * g(w)).epsilon(1e-10));
}

TEST_CASE("tabulated continuation") {
    SUBCASE("zero table gives zero") {
        const auto g = SpectralDensity::tabulated({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0});
        CHECK(std::abs(g.continuation(cplx(0.7, 0.3))) == 0.0);
        CHECK(std::abs(g.boundary(1.5)) == 0.0);
        CHECK(g.vanishes());
    }
    SUBCASE("piecewise-linear closed form against quadrature and the boundary identity") {
        std::vector<double> grid, vals;
        for (int i = 0; i <= 40; ++i) {
            const double w = 0.25 * i;
            grid.push_back(w);
            vals.push_back(0.3 * w * std::exp(-0.3 * w) * (1.0 + 0.2 * std::sin(3.0 * w)));
        }
        const auto g = SpectralDensity::tabulated(grid, vals);
        for (cplx z : {cplx(0.0, 1e-6), cplx(1.3, 0.4), cplx(6.1, 2.0), cplx(30.0, 1.0)}) {
            const cplx c = cauchy_oracle(g, z, 10.0, 0.25);
            CHECK(std::abs(c - gamma_continuation(g, z)) < 1e-10);
        }
        CHECK(g.at_zero() == doctest::Approx(cauchy_oracle(g, cplx(0.0, 1e-9), 10.0, 0.25).real()).epsilon(1e-6));
        for (double w = 0.01; w < 12.0; w += 0.173) {
            const double expect = -pi / 2 * g(w);
            CHECK(std::abs(g.boundary(w).imag() - expect) <= 1e-8 * std::abs(expect) + 1e-14);
            // boundary value is the limit from the upper half plane
            CHECK(std::abs(g.boundary(w) - g.continuation(cplx(w, 1e-9))) < 1e-6);
        }
    }
    CHECK_THROWS_AS(SpectralDensity::tabulated({0.0, 1.0}, {0.1, 0.2}), DomainError);
    CHECK_THROWS_AS(SpectralDensity::tabulated({0.0, 1.0, 0.5}, {0.0, 0.2, 0.1}), DomainError);
    CHECK(SpectralDensity::tabulated({1.0, 2.0}, {0.5, 0.5})(3.0) == 0.0);
}

TEST_CASE("susceptibility and pole scan") {
    SUBCASE("free oscillator") {
        const Susceptibility chi(2.0, {SpectralDensity::drude(0.0, 10.0)});
        CHECK(susceptibility_eval(chi, 0.0) == cplx(0.25, 0.0));
        CHECK_THROWS_AS(susceptibility_eval(chi, 2.0), PoleError);
        const auto rep = pole_scan(chi);
        CHECK_FALSE(rep.passed);
        REQUIRE(rep.candidates.size() == 1);
        CHECK(rep.candidates[0] == doctest::Approx(2.0).epsilon(1e-9));
        CHECK_THROWS_AS(chi.grid(), PoleError);
    }
    SUBCASE("S0") {
        const auto chi = s0_chi();
        CHECK(pole_scan(*chi).passed);
        CHECK(pole_scan(*chi).min_abs_denominator > 1e-6);
        const cplx f = susceptibility_eval(*chi, 1.0);
        CHECK(f.imag() > 0.0);
        CHECK(std::isfinite(f.real()));
        for (double w = 0.01; w < 100.0; w *= 1.5) CHECK(susceptibility_eval(*chi, w).imag() > 0.0);
        CHECK(chi->grid_diagnostics().unresolved_panels == 0);
    }
    SUBCASE("one damped bath suffices") {
        const Susceptibility chi(1.0, {SpectralDensity::drude(0.0, 10.0), SpectralDensity::drude(0.05, 10.0)});
        CHECK(pole_scan(chi).passed);
    }
    SUBCASE("bound state beyond a table's support") {
        const Susceptibility chi(3.0, {SpectralDensity::tabulated({0.0, 1.0, 2.0}, {0.0, 0.1, 0.0})});
        CHECK_FALSE(pole_scan(chi).passed);
    }
}

TEST_CASE("classical response on S0") {
    const auto chi = s0_chi();
    std::vector<double> ts;
    for (int i = 0; i <= 400; ++i) ts.push_back(0.25 * i);
    const auto resp = classical_u(chi, ts);
    CHECK(resp.u(0.0) == 0.0);
    CHECK(resp.u(-1.0) == 0.0);
    MESSAGE("measured du(0+) = " << resp.initial_slope());
    CHECK(resp.initial_slope() == doctest::Approx(1.0).epsilon(1e-9));

    const auto ode = testing_support::langevin_ode(1.0, {{0.05, 10.0}, {0.05, 10.0}}, ts, 0.0, resp.initial_slope());
    double worst = 0.0, worst_d = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        worst = std::max(worst, std::abs(resp.u_values()[i] - ode[i][0]));
        worst_d = std::max(worst_d, std::abs(resp.du_values()[i] - ode[i][1]));
    }
    MESSAGE("max |u - u_ode| on [0,100] = " << worst << ", du: " << worst_d);
    CHECK(worst < 1e-4);
    CHECK(worst_d < 1e-4);

    // ddu against the equation of motion: ddu = -Omega^2 u - z
    for (double t : {0.0, 0.3, 2.0, 17.0}) {
        const double h = 1e-4;
        const double fd = (resp.du(t + h) - resp.du(std::max(t - h, 0.0))) / (t > 0 ? 2 * h : h);
        // one-sided at t = 0, where ddu(0+) = 0 and the difference is O(h)
        CHECK(std::abs(resp.ddu(t) - fd) < (t > 0 ? 1e-6 : 2e-4));
    }

    // decay: the slowest pole sits at Im z = -0.0493, so |u(200)| is ~5e-5 and
    // the 1e-6 level is reached near t = 300
    const auto late = testing_support::langevin_ode(1.0, {{0.05, 10.0}, {0.05, 10.0}}, {0.0, 200.0, 400.0});
    CHECK(std::abs(resp.u(200.0) - late[1][0]) < 1e-8);
    CHECK(std::abs(resp.u(400.0)) < 1e-6);
    CHECK(std::abs(resp.u(400.0) - late[2][0]) < 1e-9);
    double env = 0.0;
    for (double t = 0; t < 400; t += 0.5) env = std::max(env, std::abs(resp.u(t)) * std::exp(0.0492 * t));
    CHECK(env < 1.5);
}

TEST_CASE("full and partial transforms") {
    const auto chi = s0_chi();
    const ClassicalResponse resp(chi, {}, 800.0);
    for (double w = 0.1; w <= 5.0; w += 0.07) {
        const cplx u = full_ft(resp, w);
        const double gs = chi->gamma_sum(w);
        CHECK(std::abs(u.imag() + pi / 2 * gs * std::norm(u)) < 1e-10 * std::abs(u.imag()) + 1e-16);
        CHECK(std::norm(u) == doctest::Approx(std::norm(chi->boundary(w))).epsilon(1e-15));
    }
    // causality: the time-domain transform of u equals conj F
    const std::vector<double> ws{0.0, 0.3, 1.0, 1.01, 2.5, 9.0, 40.0};
    const auto far = resp.partial({0.0, 400.0, 800.0}, ws);
    for (std::size_t j = 0; j < ws.size(); ++j) {
        CHECK(std::abs(far[0].u[j]) == 0.0);
        CHECK(std::abs(far[0].v[j]) == 0.0);
        const cplx expect = std::polar(1.0, ws[j] * 800.0) * resp.full_ft(ws[j]);
        CHECK(std::abs(far[2].u[j] - expect) < 1e-10);
        const cplx expect400 = std::polar(1.0, ws[j] * 400.0) * resp.full_ft(ws[j]);
        CHECK(std::abs(far[1].u[j] - expect400) < 1e-4);
    }
    // v = u(t) + i w u(t,w); w = 0 gives the plain integral
    const std::vector<double> ts{0.37, 5.0, 12.25, 33.3};
    const auto part = resp.partial(ts, ws);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = 0; j < ws.size(); ++j) {
            const cplx rhs = resp.u(ts[i]) + cplx(0.0, ws[j]) * part[i].u[j];
            CHECK(std::abs(part[i].v[j] - rhs) < 1e-11);
        }
        CHECK(part[i].u[0].imag() == doctest::Approx(0.0));
        const auto gl = quad::PanelGrid({0.0, ts[i]}, 40).refined(0.25);
        const auto us = gl.sample([&](double t) { return resp.u(t); });
        CHECK(part[i].u[0].real() == doctest::Approx(gl.integrate(us)).epsilon(1e-11));
    }
    const auto single = partial_ft(resp, 5.0, 1.0);
    CHECK(std::abs(single.first - part[1].u[2]) < 1e-14);
}
