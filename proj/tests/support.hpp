// support.hpp: shared fixtures and independent oracles for the unit tests.

#pragma once

#include "oscbath/scenario.hpp"
#include "oscbath/spectral.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <memory>
#include <vector>

namespace testing_support {

inline std::shared_ptr<const oscbath::Susceptibility> s0_chi() {
    static auto chi = std::make_shared<const oscbath::Susceptibility>(
        1.0, std::vector<oscbath::SpectralDensity>{oscbath::SpectralDensity::drude(0.05, 10.0),
                                                   oscbath::SpectralDensity::drude(0.05, 10.0)});
    return chi;
}

// S0 spectra with the given preparations (left, right).
inline std::shared_ptr<const oscbath::Scenario> s0(oscbath::BathPreparation left, oscbath::BathPreparation right) {
    using oscbath::SpectralDensity;
    return std::make_shared<const oscbath::Scenario>(
        1.0, std::vector<oscbath::Bath>{{SpectralDensity::drude(0.05, 10.0), std::move(left)},
                                        {SpectralDensity::drude(0.05, 10.0), std::move(right)}});
}

inline std::shared_ptr<const oscbath::Scenario> s0_thermal(double tl, double tr) {
    return s0(oscbath::BathPreparation::thermal(tl), oscbath::BathPreparation::thermal(tr));
}

// Time-domain integration of  u'' = -Omega^2 u - int_0^t K(t-s) u'(s) ds - K(t) u(0)
// for Drude baths, K(t) = sum kappa wc exp(-wc t), via auxiliary variables
// z_a' = kappa wc u' - wc z_a with z_a(0) = kappa wc u(0). Returns (u, u') at the
// requested times.
struct DrudeBath {
    double kappa, cutoff;
};

inline std::vector<std::array<double, 2>> langevin_ode(double omega0, const std::vector<DrudeBath>& baths,
                                                       const std::vector<double>& times, double u0 = 0.0,
                                                       double du0 = 1.0) {
    using state = std::vector<double>;
    const std::size_t nb = baths.size();
    auto rhs = [&](const state& x, state& dx, double) {
        double z = 0.0;
        for (std::size_t a = 0; a < nb; ++a) z += x[2 + a];
        dx[0] = x[1];
        dx[1] = -omega0 * omega0 * x[0] - z;
        for (std::size_t a = 0; a < nb; ++a)
            dx[2 + a] = baths[a].kappa * baths[a].cutoff * x[1] - baths[a].cutoff * x[2 + a];
    };
    state x(2 + nb, 0.0);
    x[0] = u0;
    x[1] = du0;
    for (std::size_t a = 0; a < nb; ++a) x[2 + a] = baths[a].kappa * baths[a].cutoff * u0;
    std::vector<std::array<double, 2>> out;
    auto stepper = boost::numeric::odeint::make_dense_output(1e-13, 1e-13,
                                                             boost::numeric::odeint::runge_kutta_dopri5<state>());
    std::vector<double> ts = times;
    boost::numeric::odeint::integrate_times(stepper, rhs, x, ts.begin(), ts.end(), 1e-3,
                                            [&](const state& s, double) { out.push_back({s[0], s[1]}); });
    return out;
}

} // namespace testing_support
