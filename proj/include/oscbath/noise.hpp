// noise.hpp: means and correlations of the fluctuating forces eta_a(t), the
// initial slip term and the friction kernel.

#pragma once

#include "oscbath/scenario.hpp"

namespace oscbath {

// K(t) = int (gamma(w)/w) cos(wt) dw; closed form kappa wc exp(-wc t) for Drude.
double friction_kernel(const SpectralDensity& spec, double t);
// Same integral by panel quadrature, for any spectral density.
double friction_kernel_quadrature(const SpectralDensity& spec, double t);

// Noise of one bath of a scenario; cross-bath correlations vanish identically.
class NoiseKernel {
public:
    NoiseKernel(const Scenario& sc, std::size_t bath);

    std::size_t bath() const noexcept { return a_; }
    const Scenario& scenario() const noexcept { return *sc_; }

    // Legendre coefficients on the scenario grid of the noise amplitudes.
    const std::vector<double>& energy_coeffs() const noexcept { return ce_; }
    const std::vector<double>& squeeze_coeffs() const noexcept { return cd_; }
    const std::vector<double>& cross_coeffs() const noexcept { return cc_; }
    const std::vector<double>& mean_q_coeffs() const noexcept { return cq_; }
    const std::vector<double>& mean_p_coeffs() const noexcept { return cp_; }

private:
    const Scenario* sc_;
    std::size_t a_;
    std::vector<double> ce_, cd_, cc_, cq_, cp_;
};

// <eta_a(t)> = int sqrt(w gamma) (X_Q cos wt + X_P sin(wt)/w) dw
double noise_mean(const NoiseKernel& k, double t);
// Symmetrised covariance S_eta_a eta_a(t, s), including sigma2 if present.
double noise_correlation(const NoiseKernel& k, double t, double s);
// S for baths a != b: zero for factorising preparations.
double noise_cross_correlation(const NoiseKernel& a, const NoiseKernel& b, double t, double s);
// Stationary limit int (gamma/w) E(w) cos(w s) dw.
double noise_stationary(const NoiseKernel& k, double s);
// S_xi xi(t, s) = S_eta eta(t, s) + Sigma_QQ(0) K(t) K(s).
double slip_correlation(const NoiseKernel& k, double sigma_qq0, double t, double s);

} // namespace oscbath
