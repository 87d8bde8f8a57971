// transport.hpp: steady energy current between two baths, its fluctuations
// and the cumulant generating function of the transferred energy.
//
// Sign convention: positive current flows from the left bath into the system.

#pragma once

#include "oscbath/scenario.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace oscbath {

class TransportModel {
public:
    // Requires exactly two baths; `left` selects which one is l.
    explicit TransportModel(std::shared_ptr<const Scenario> sc, std::size_t left = 0);

    const Scenario& scenario() const noexcept { return *sc_; }
    std::shared_ptr<const Scenario> scenario_ptr() const noexcept { return sc_; }
    std::size_t left() const noexcept { return l_; }
    std::size_t right() const noexcept { return r_; }
    // Same scenario with l and r exchanged.
    TransportModel swapped() const { return TransportModel(sc_, r_); }

    // Node data: T(w) = pi^2 gamma_l gamma_r |u|^2 and occupations n = E/w - 1/2.
    const std::vector<double>& transmission() const noexcept { return trans_; }
    const std::vector<double>& occupation_left() const noexcept { return n_l_; }
    const std::vector<double>& occupation_right() const noexcept { return n_r_; }
    // Upper frequency of the cumulant generating function integral.
    double cgf_cutoff() const noexcept { return cutoff_; }

private:
    std::shared_ptr<const Scenario> sc_;
    std::size_t l_{0}, r_{1};
    std::vector<double> trans_, n_l_, n_r_;
    double cutoff_{0.0};
};

// (pi/2) int gamma_l gamma_r |u|^2 (E_l - E_r)
double steady_current(const TransportModel& m);
// -int gamma_l [u_I E_l + (pi/2) sum_a gamma_a |u|^2 E_a], with u_I = -Im F.
double first_cumulant_rate(const TransportModel& m);
// Delta T (pi/2) int gamma_l gamma_r |u|^2 (w/2T_r)^2 / sinh^2(w/2T_r); both baths thermal.
double linear_response_current(const TransportModel& m, double T_r, double dT);
double linear_response_slope(const TransportModel& m, double T_r);
// Second cumulant rate of the transferred energy.
double second_cumulant_rate(const TransportModel& m);
// Same quantity from Bose occupations and the transmission; thermal baths only.
double second_cumulant_rate_thermal(const TransportModel& m);

// G(xi) with continuous branch tracking along w; throws BranchError.
std::complex<double> cgf(const TransportModel& m, std::complex<double> xi);

struct AffinityReport {
    bool constant{false};
    double A{0.0};                  // beta_r - beta_l (mean over the grid if not constant)
    double beta_l_min{0.0}, beta_l_max{0.0};
    double beta_r_min{0.0}, beta_r_max{0.0};
    std::size_t invalid_points{0};  // arcoth argument <= 1
};
AffinityReport affinity(const TransportModel& m, double rel_tol = 1e-8);

// max over xi of |G(xi) - G(-xi + i A)|
double gc_residual(const TransportModel& m, const std::vector<double>& xis, double A);

} // namespace oscbath
