#include "doctest.h"

#include "support.hpp"

#include "oscbath/correlations.hpp"
#include "oscbath/errors.hpp"

#include <cmath>
#include <numbers>

using namespace oscbath;
using testing_support::s0;
using testing_support::s0_thermal;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> omega_grid(double lo, double hi, int n) {
    std::vector<double> w;
    for (int k = 0; k < n; ++k) w.push_back(lo + (hi - lo) * k / (n - 1));
    return w;
}

// |F(w)|^2 for S0 assembled from the Drude closed form
double s0_u2(double w) {
    const cplx g = 0.05 * 10.0 * w / (w + cplx(0.0, 10.0));
    return std::norm(1.0 / (1.0 - w * w + 2.0 * g));
}

double s0_gamma(double w) { return 2.0 / pi * 0.05 * w * 100.0 / (w * w + 100.0); }

BathPreparation scaled_thermal(double T, double c) {
    BathPreparation::CustomSpec spec;
    spec.sigma_qq = [T, c](double w) { return c * thermal_energy(w, T) / (w * w); };
    spec.sigma_pp = [T, c](double w) { return c * thermal_energy(w, T); };
    return BathPreparation::custom(spec);
}

} // namespace

TEST_CASE("spectra from independently assembled factors") {
    const auto sc = s0_thermal(1.0, 2.0);
    const double w = 1.0;
    const double expected = pi * (s0_gamma(w) * thermal_energy(w, 1.0) + s0_gamma(w) * thermal_energy(w, 2.0)) * s0_u2(w) / w;
    CHECK(psi_spectrum(*sc, w) == doctest::Approx(expected).epsilon(1e-12));
    const auto terms = psi_spectrum_terms(*sc, w);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0] + terms[1] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(phi_spectrum(*sc, 2.5) == doctest::Approx(pi * 2.0 * s0_gamma(2.5) * s0_u2(2.5)).epsilon(1e-12));
    CHECK_THROWS_AS(psi_spectrum(*sc, 0.0), DomainError);
    CHECK_THROWS_AS(phi_spectrum(*sc, -1.0), DomainError);
}

TEST_CASE("psi is linear in the energy distributions") {
    const auto a = s0_thermal(1.0, 1.0);
    const auto b = s0(scaled_thermal(1.0, 2.0), scaled_thermal(1.0, 2.0));
    for (double w : {0.3, 1.0, 3.0}) CHECK(psi_spectrum(*b, w) == doctest::Approx(2.0 * psi_spectrum(*a, w)).epsilon(1e-12));
}

TEST_CASE("phi does not depend on the preparation") {
    const auto a = s0_thermal(1.0, 1.0);
    const auto b = s0(BathPreparation::squeezed_thermal(3.0, 0.5), effectively_thermal(0.5, -0.4));
    for (double w : omega_grid(0.05, 6.0, 40)) CHECK(std::abs(phi_spectrum(*a, w) - phi_spectrum(*b, w)) <= 1e-12 * phi_spectrum(*a, w));

    // doubling both couplings changes Phi through gamma and |u|^2
    const auto d = std::make_shared<const Scenario>(
        1.0, std::vector<Bath>{{SpectralDensity::drude(0.1, 10.0), BathPreparation::thermal(1.0)},
                               {SpectralDensity::drude(0.1, 10.0), BathPreparation::thermal(1.0)}});
    for (double w : {0.5, 1.0, 2.0}) {
        const cplx g = 0.1 * 10.0 * w / (w + cplx(0.0, 10.0));
        const double u2 = std::norm(1.0 / (1.0 - w * w + 2.0 * g));
        CHECK(phi_spectrum(*d, w) == doctest::Approx(pi * 4.0 * s0_gamma(w) * u2).epsilon(1e-12));
    }
}

TEST_CASE("phi vanishes outside the spectral support") {
    const auto tab = SpectralDensity::tabulated({0.0, 1.0, 3.0}, {0.0, 0.05, 0.0});
    const auto sc = std::make_shared<const Scenario>(1.5, std::vector<Bath>{{tab, BathPreparation::thermal(1.0)}});
    CHECK(phi_spectrum(*sc, 4.0) == 0.0);
    CHECK(psi_spectrum(*sc, 4.0) == 0.0);
}

TEST_CASE("stationary correlations") {
    const auto sc = s0_thermal(2.0, 1.0);
    const auto c = stationary_correlations(*sc, {0.0, 1.5, -1.5, 4.0, -4.0});
    CHECK(c.phi[0] == 0.0);
    CHECK(c.psi[1] == doctest::Approx(c.psi[2]).epsilon(1e-14));
    CHECK(c.phi[1] == doctest::Approx(-c.phi[2]).epsilon(1e-14));
    CHECK(c.psi[3] == doctest::Approx(c.psi[4]).epsilon(1e-14));
    CHECK(std::abs(c.psi[0] - asymptotic_state(*sc).Sigma(0, 0)) < 1e-6);
}

TEST_CASE("Fourier round trip of Psi(s)") {
    const auto sc = s0_thermal(2.0, 1.0);
    // Psi(w) = 2 int_0^inf Psi(s) cos(ws) ds by composite Simpson on [0, 800]
    const double h = 0.02;
    const int n = 40000;
    std::vector<double> lags(n + 1);
    for (int k = 0; k <= n; ++k) lags[k] = h * k;
    const auto c = stationary_correlations(*sc, lags);
    for (double w : {0.5, 1.0, 1.5}) {
        double acc = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double f = c.psi[k] * std::cos(w * lags[k]);
            acc += (k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0)) * f;
        }
        const double back = 2.0 * acc * h / 3.0;
        CHECK(std::abs(back - psi_spectrum(*sc, w)) < 1e-3 * psi_spectrum(*sc, w));
    }
}

TEST_CASE("finite time correlations") {
    const auto sc = s0_thermal(2.0, 1.0);
    const auto init = MomentState::make(1.0, 0.0, 0.5, 0.0, 0.5);
    const auto z = finite_time_correlations(*sc, init, 0.0, 0.0);
    CHECK(z.psi == doctest::Approx(0.5 + 1.0).epsilon(1e-12));
    CHECK(z.phi == 0.0);
    for (double t : {0.7, 12.0}) CHECK(std::abs(finite_time_correlations(*sc, init, t, 0.0).phi) < 1e-10);
    const auto st = stationary_correlations(*sc, {0.0, 1.0, 3.0});
    const auto ft = finite_time_correlations(*sc, init, {{200.0, 0.0}, {200.0, 1.0}, {200.0, 3.0}});
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(ft[k].psi - st.psi[k]) < 1e-3);
        CHECK(std::abs(ft[k].phi - st.phi[k]) < 1e-3);
    }
    // the equal-time value is the propagated variance plus the squared mean
    const auto m = propagate(*sc, init, 5.0);
    CHECK(finite_time_correlations(*sc, init, 5.0, 0.0).psi ==
          doctest::Approx(m.Sigma(0, 0) + m.X(0) * m.X(0)).epsilon(1e-10));
    CHECK_THROWS_AS(finite_time_correlations(*sc, init, 1.0, -2.0), DomainError);
}

TEST_CASE("generalized fluctuation-dissipation relation") {
    const auto grid = omega_grid(0.1, 5.0, 60);
    const auto sq = s0(BathPreparation::thermal(1.0), BathPreparation::squeezed_thermal(1.0, 0.5));
    const auto r = fdt_check(*sq, grid);
    CHECK(r.residual < 1e-10);
    REQUIRE(r.lhs.size() == grid.size());

    const auto eq = s0_thermal(1.0, 1.0);
    CHECK(equilibrium_fdt_residual(*eq, grid, 1.0) < 1e-8);
    const auto re = fdt_check(*eq, grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
        CHECK(re.rhs[k] == doctest::Approx(0.5 / std::tanh(0.5 * grid[k]) * phi_spectrum(*eq, grid[k])).epsilon(1e-12));

    // one squeezed bath: Psi/Phi = E/w
    const auto one = std::make_shared<const Scenario>(
        1.0, std::vector<Bath>{{SpectralDensity::drude(0.05, 10.0), BathPreparation::squeezed_thermal(1.0, 0.5)}});
    for (double w : {0.4, 1.0, 2.0})
        CHECK(psi_spectrum(*one, w) / phi_spectrum(*one, w) ==
              doctest::Approx(std::cosh(1.0) * thermal_energy(w, 1.0) / w).epsilon(1e-12));
}

TEST_CASE("effective temperature") {
    const auto grid = omega_grid(0.1, 5.0, 30);
    const auto eq = s0_thermal(1.5, 1.5);
    for (double w : grid) {
        const auto e = effective_temperature(*eq, w);
        CHECK(e.valid);
        CHECK(e.value == doctest::Approx(1.5).epsilon(1e-10));
    }
    CHECK(thermalization_check(*eq, grid, 1e-8).passed);

    const auto neq = s0_thermal(2.0, 1.0);
    const auto r = thermalization_check(*neq, grid, 1e-3);
    CHECK_FALSE(r.passed);
    CHECK(r.t_max - r.t_min > 0.01);
    CHECK(r.t_min > 1.0);
    CHECK(r.t_max < 2.0);
}
