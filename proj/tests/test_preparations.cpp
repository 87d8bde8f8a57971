#include "doctest.h"

#include "oscbath/errors.hpp"
#include "oscbath/preparations.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace oscbath;

TEST_CASE("thermal energy values and limits") {
    CHECK(thermal_energy(1.0, 1.0) == doctest::Approx(0.5 / std::tanh(0.5)).epsilon(1e-15));
    // series 1/x + x/3 - x^3/45 + 2x^5/945 at x = 1/2, times 1/2
    const double x = 0.5;
    const double series = 0.5 * (1.0 / x + x / 3.0 - std::pow(x, 3) / 45.0 + 2.0 * std::pow(x, 5) / 945.0 -
                                 std::pow(x, 7) / 4725.0);
    CHECK(thermal_energy(1.0, 1.0) == doctest::Approx(series).epsilon(1e-6));
    CHECK(thermal_energy(1.0, 1.0) == doctest::Approx(1.0819767).epsilon(1e-7));
    CHECK(thermal_energy(2.0, 1e-3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(thermal_energy(1.0, 1e6) == doctest::Approx(1e6).epsilon(1e-10));
    CHECK(thermal_energy(0.0, 3.0) == 3.0);
    // continuity across the small-argument branch
    CHECK(thermal_energy(1.999e-4, 1.0) == doctest::Approx(thermal_energy(2.001e-4, 1.0)).epsilon(1e-7));
    CHECK_THROWS_AS(thermal_energy(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(thermal_energy(1.0, -1.0), DomainError);
    CHECK(bose_occupation(1.0, 1.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-15));
}

TEST_CASE("thermal preparation") {
    const auto p = BathPreparation::thermal(1.0);
    CHECK_NOTHROW(p.validate({0.01, 0.1, 1.0, 10.0, 100.0}));
    for (double w = 0.01; w < 50.0; w *= 1.3) {
        CHECK(energy_distribution(p, w) == doctest::Approx(thermal_energy(w, 1.0)).epsilon(1e-12));
        CHECK(p.scaled_qq(w) == doctest::Approx(thermal_energy(w, 1.0)).epsilon(1e-15));
        CHECK(p.sigma_pp(w) == doctest::Approx(thermal_energy(w, 1.0)).epsilon(1e-15));
        CHECK(p.sigma_qp(w) == 0.0);
        CHECK(p.mean_q(w) == 0.0);
        CHECK(p.mean_p(w) == 0.0);
        CHECK(p.energy(w) >= 0.5 * w);
        CHECK(p.excess_energy(w) == doctest::Approx(p.energy(w) - 0.5 * w).epsilon(1e-12));
    }
    CHECK_FALSE(p.has_sigma2());
    CHECK(p.thermal_second_moments());
    CHECK(BathPreparation::thermal(1e-3).energy(1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("squeezed thermal matches a one-mode squeezing matrix") {
    const double r = 0.5, w = 1.0, T = 1.0;
    const auto p = BathPreparation::squeezed_thermal(T, r);
    CHECK(p.energy(w) == doctest::Approx(std::cosh(2.0 * r) * thermal_energy(w, T)).epsilon(1e-15));
    // S = diag(e^r, e^-r) acting on the thermal covariance diag(E/w^2, E)
    Eigen::Matrix2d s0 = Eigen::Vector2d(thermal_energy(w, T) / (w * w), thermal_energy(w, T)).asDiagonal();
    Eigen::Matrix2d S = Eigen::Vector2d(std::exp(r), std::exp(-r)).asDiagonal();
    const Eigen::Matrix2d sq = S * s0 * S.transpose();
    CHECK(p.sigma_qq(w) == doctest::Approx(sq(0, 0)).epsilon(1e-14));
    CHECK(p.sigma_pp(w) == doctest::Approx(sq(1, 1)).epsilon(1e-14));
    CHECK(p.energy(w) == doctest::Approx(0.5 * (w * w * sq(0, 0) + sq(1, 1))).epsilon(1e-14));
    CHECK(p.excess_energy(2.0) == doctest::Approx(p.energy(2.0) - 1.0).epsilon(1e-12));
    CHECK_FALSE(p.thermal_second_moments());
    CHECK_NOTHROW(p.validate({0.1, 1.0, 10.0}));
}

TEST_CASE("displaced thermal keeps thermal second moments") {
    auto bump = [](double w) { return std::exp(-(w - 1.0) * (w - 1.0) / 0.02); };
    const auto p = BathPreparation::displaced_thermal(1.0, bump, {});
    CHECK(p.has_means());
    CHECK(p.mean_q(1.0) == doctest::Approx(1.0));
    CHECK(p.mean_p(1.0) == 0.0);
    for (double w : {0.3, 1.0, 4.0}) CHECK(p.energy(w) == doctest::Approx(thermal_energy(w, 1.0)).epsilon(1e-15));
    CHECK(p.thermal_second_moments());
}

TEST_CASE("custom preparation validation") {
    BathPreparation::CustomSpec bad;
    bad.sigma_qq = [](double) { return 1.0; };
    bad.sigma_pp = [](double) { return 0.2; };
    bad.sigma_qp = [](double) { return 0.0; };
    CHECK_THROWS_AS(BathPreparation::custom(bad), InvalidPreparation);

    // violation only at w = 2
    BathPreparation::CustomSpec local;
    local.sigma_qq = [](double w) { return 1.0 / (2.0 * w); };
    local.sigma_pp = [](double w) { return std::abs(w - 2.0) < 1e-9 ? 0.4 * w : w / 2.0; };
    local.check_grid = {2.0};
    try {
        BathPreparation::custom(local);
        FAIL("expected InvalidPreparation");
    } catch (const InvalidPreparation& e) {
        CHECK(e.omega() == doctest::Approx(2.0));
    }

    BathPreparation::CustomSpec ok;
    ok.sigma_qq = [](double w) { return 1.0 / (2.0 * w); };
    ok.sigma_pp = [](double w) { return w / 2.0; };
    const auto g = BathPreparation::custom(ok);
    CHECK(g.energy(3.0) == doctest::Approx(1.5));

    PreparationParams params;
    params.kind = BathPreparation::Kind::Custom;
    params.custom = bad;
    CHECK_THROWS_AS(make_preparation(params), InvalidPreparation);
    CHECK_THROWS_AS(Table({0.0, 1.0}, {1.0}), InvalidPreparation);
    CHECK_THROWS_AS(Table({1.0, 0.0}, {1.0, 2.0}), InvalidPreparation);
}

TEST_CASE("table interpolation") {
    const Table t({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0});
    CHECK(t(0.5) == doctest::Approx(1.0));
    CHECK(t(2.0) == doctest::Approx(1.0));
    CHECK(t(3.5) == 0.0);
    CHECK(t(-1.0) == 0.0);
}

TEST_CASE("make_preparation and effectively thermal states") {
    PreparationParams params;
    params.kind = BathPreparation::Kind::SqueezedThermal;
    params.temperature = 2.0;
    params.squeeze = 0.3;
    const auto p = make_preparation(params, {0.5, 1.0});
    CHECK(p.energy(1.0) == doctest::Approx(std::cosh(0.6) * thermal_energy(1.0, 2.0)));

    const auto e = effectively_thermal(1.0, 0.7);
    CHECK(e.sigma_qp(1.0) != 0.0);
    for (double w : {0.05, 0.5, 1.0, 5.0, 30.0}) {
        CHECK(e.energy(w) == doctest::Approx(thermal_energy(w, 1.0)).epsilon(1e-13));
        CHECK(e.excess_energy(w) == doctest::Approx(w * bose_occupation(w, 1.0)).epsilon(1e-13));
        CHECK(e.sigma_qq(w) * e.sigma_pp(w) - e.sigma_qp(w) * e.sigma_qp(w) >= 0.25 * (1.0 - 1e-12));
    }
    CHECK_THROWS_AS(effectively_thermal(1.0, 1.5), DomainError);
}
