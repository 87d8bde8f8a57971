// correlations.hpp: symmetric and antisymmetric position correlation
// functions, their spectra, and the generalized fluctuation-dissipation relation.
//
// Phi(w) is purely imaginary; it is stored as its coefficient of i.

#pragma once

#include "oscbath/genfunc.hpp"
#include "oscbath/scenario.hpp"

#include <utility>
#include <vector>

namespace oscbath {

// Psi(w) = pi sum_a gamma_a |u(w)|^2 E_a / w
double psi_spectrum(const Scenario& sc, double w);
// Phi(w) / i = pi sum_a gamma_a |u(w)|^2
double phi_spectrum(const Scenario& sc, double w);
// Per-bath terms of psi_spectrum.
std::vector<double> psi_spectrum_terms(const Scenario& sc, double w);

struct CorrelationResult {
    std::vector<double> lags, psi, phi;
    std::vector<double> omegas, psi_w, phi_w;
};

CorrelationResult stationary_correlations(const Scenario& sc, const std::vector<double>& lags,
                                          const std::vector<double>& omegas = {});

struct TwoTime {
    double t{0.0}, s{0.0};
    double psi{0.0}, phi{0.0};
};
// Transient Psi(t, s), Phi(t, s) for each (t, s) pair.
std::vector<TwoTime> finite_time_correlations(const Scenario& sc, const MomentState& init,
                                              const std::vector<std::pair<double, double>>& points);
TwoTime finite_time_correlations(const Scenario& sc, const MomentState& init, double t, double s);

struct FdtReport {
    std::vector<double> omegas, lhs, rhs;
    double residual{0.0}; // max |lhs - rhs| / |lhs|
};
// lhs Psi(w); rhs (1/i) [sum gamma E / (w sum gamma)] Phi(w).
FdtReport fdt_check(const Scenario& sc, const std::vector<double>& omegas);
// Max relative deviation between Psi(w) and (1/2) coth(w/2T) Phi(w)/i.
double equilibrium_fdt_residual(const Scenario& sc, const std::vector<double>& omegas, double T);

struct EffectiveTemperature {
    double value{0.0};
    bool valid{false}; // false where the arcoth argument is <= 1
};
EffectiveTemperature effective_temperature(const Scenario& sc, double w);

struct ThermalizationReport {
    bool passed{false};
    double t_min{0.0}, t_max{0.0};
    std::size_t invalid_points{0};
};
ThermalizationReport thermalization_check(const Scenario& sc, const std::vector<double>& omegas, double tol);

} // namespace oscbath
