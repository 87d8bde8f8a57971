// genfunc.hpp: Gaussian moment propagation of the central oscillator and the
// position generating function Z_Q(xi, t).

#pragma once

#include "oscbath/scenario.hpp"

#include <complex>
#include <vector>

namespace oscbath {

struct MomentState {
    Vec2 X{Vec2::Zero()};     // <Q>, <P>
    Mat2 Sigma{Mat2::Zero()}; // symmetrised covariance
    double t{0.0};

    static MomentState make(double q, double p, double sqq, double sqp, double spp, double t = 0.0);
    // Ground state of the bare oscillator: Sigma = diag(1/(2 Omega), Omega/2).
    static MomentState ground(double omega0);
    // Throws InvalidPreparation if Sigma is not a valid quantum covariance.
    void validate() const;
};

struct Propagator {
    double t{0.0};
    Mat2 U{Mat2::Identity()};
    Vec2 I{Vec2::Zero()};
    Mat2 C{Mat2::Zero()};
};

std::vector<Propagator> propagators(const Scenario& sc, const std::vector<double>& times);
Propagator propagator(const Scenario& sc, double t);

MomentState propagate(const Propagator& prop, const MomentState& init);
MomentState propagate(const Scenario& sc, const MomentState& init, double t);
std::vector<MomentState> propagate(const Scenario& sc, const MomentState& init, const std::vector<double>& times);

// Stationary state: X = 0 and Sigma = diag(int gamma |F|^2 E / w, int gamma |F|^2 w E).
MomentState asymptotic_state(const Scenario& sc);

struct AsymptoticEstimate {
    MomentState state;
    double change{0.0}; // max entry change between the last two doublings
    bool converged{false};
};
// Propagates to t0, 2 t0, 4 t0, ... until Sigma changes by less than tol.
AsymptoticEstimate asymptotic_by_doubling(const Scenario& sc, const MomentState& init, double tol = 1e-10,
                                          double t0 = 50.0, double t_max = 800.0);

// exp(-xi^2 Sigma_QQ / 2 + i xi <Q>)
std::complex<double> zq(const MomentState& state, std::complex<double> xi);
std::complex<double> zq(const Scenario& sc, const MomentState& init, std::complex<double> xi, double t);

// A(t) = 2 <Q(t)> / Sigma_QQ(t); throws DomainError for a degenerate variance.
double gc_shift(const MomentState& state);
double gc_shift(const Scenario& sc, const MomentState& init, double t);

} // namespace oscbath
