// spectral.hpp: bath spectral densities gamma(w), their continuation Gamma(z),
// the susceptibility F(z) and the classical solution u(t) with its transforms.
//
// Units: hbar = k_B = 1. gamma follows the convention gamma = D lambda^2 / w
// (no pi/2 factor), so that Im Gamma(w + i0+) = -(pi/2) gamma(w).

#pragma once

#include "oscbath/quadrature.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace oscbath {

using cplx = std::complex<double>;

class SpectralDensity {
public:
    enum class Kind { Drude, Tabulated };

    // gamma(w) = (2/pi) kappa w wc^2 / (w^2 + wc^2), Gamma(z) = kappa wc z / (z + i wc).
    static SpectralDensity drude(double kappa, double cutoff);
    // Piecewise-linear gamma on a strictly increasing grid, zero outside it.
    static SpectralDensity tabulated(std::vector<double> grid, std::vector<double> values);

    Kind kind() const noexcept { return kind_; }
    double kappa() const noexcept { return kappa_; }
    double cutoff() const noexcept { return cutoff_; }
    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double operator()(double w) const;
    // Gamma(z) for Im z > 0.
    cplx continuation(cplx z) const;
    // Boundary value Gamma(w + i0+), w >= 0.
    cplx boundary(double w) const;
    // Gamma(i0+); zero for the Drude closed form, -int gamma/w for tables.
    double at_zero() const;
    // int_0^inf gamma(w)/w dw, which equals the friction kernel K(0).
    double inverse_moment() const;

    bool vanishes() const;
    // Upper end of the support (infinite for Drude).
    double support_end() const;
    // Characteristic frequency used to size grids.
    double scale() const;
    // Kinks of gamma that quadrature panels must respect.
    std::vector<double> breakpoints() const;

private:
    SpectralDensity() = default;
    cplx table_cauchy(cplx z, bool on_axis) const;

    Kind kind_{Kind::Drude};
    double kappa_{0.0};
    double cutoff_{1.0};
    std::vector<double> grid_;
    std::vector<double> values_;
};

struct PoleReport {
    bool passed{true};
    std::vector<double> candidates; // real frequencies where F blows up
    double min_abs_denominator{0.0};
    double scan_max{0.0};
    std::size_t points{0};
};

struct SusceptibilityOptions {
    double pole_tol{1e-6};
    std::size_t scan_points{10000};
    double omega_max{0.0};   // 0: 50 max(Omega, cutoffs) or the largest table end
    int tail_octaves{-1};    // -1: 12 when a Drude bath is present, else 0
    int order{20};
    double rel_tol{1e-13};
    int max_depth{40};
};

// F(z) = (Omega^2 - sum Gamma_a(i0+) - z^2 + sum Gamma_a(z))^{-1}.
class Susceptibility {
public:
    Susceptibility(double omega0, std::vector<SpectralDensity> baths, SusceptibilityOptions opts = {});

    double omega0() const noexcept { return omega0_; }
    const std::vector<SpectralDensity>& baths() const noexcept { return baths_; }
    const SusceptibilityOptions& options() const noexcept { return opts_; }

    double gamma_sum(double w) const;
    cplx denominator(cplx z) const;
    cplx denominator_boundary(double w) const;
    cplx operator()(cplx z) const;
    // F(w + i0+); throws PoleError where the denominator is below tolerance.
    cplx boundary(double w) const;

    double omega_max() const noexcept { return omega_max_; }
    int tail_octaves() const noexcept { return tail_octaves_; }
    std::vector<double> breakpoints() const;

    const PoleReport& pole_report() const noexcept { return report_; }
    // Adaptive grid resolving F and F on its nodes; throws PoleError if the
    // scan failed.
    const quad::PanelGrid& grid() const;
    const std::vector<cplx>& grid_values() const;
    const quad::GridDiagnostics& grid_diagnostics() const noexcept { return diag_; }

private:
    PoleReport scan() const;

    double omega0_;
    std::vector<SpectralDensity> baths_;
    SusceptibilityOptions opts_;
    double omega_max_{0.0};
    int tail_octaves_{0};
    double counter_{0.0}; // sum Gamma_a(i0+)
    PoleReport report_;
    quad::PanelGrid grid_;
    std::vector<cplx> values_;
    quad::GridDiagnostics diag_;
};

// u(t) = (2/pi) int sin(wt) Im F(w+i0+) dw and everything derived from it.
class ClassicalResponse {
public:
    // Samples u, du, ddu on `times`; partial transforms are available for
    // t <= max(horizon, max(times)).
    ClassicalResponse(std::shared_ptr<const Susceptibility> chi, std::vector<double> times, double horizon = 0.0);

    const Susceptibility& susceptibility() const noexcept { return *chi_; }
    std::shared_ptr<const Susceptibility> susceptibility_ptr() const noexcept { return chi_; }

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& u_values() const noexcept { return u_; }
    const std::vector<double>& du_values() const noexcept { return du_; }
    const std::vector<double>& ddu_values() const noexcept { return ddu_; }

    double u(double t) const;
    double du(double t) const;
    double ddu(double t) const;
    // (2/pi) int w Im F dw, the measured value of du(0+).
    double initial_slope() const noexcept { return slope0_; }

    // u(w) = int_0^inf u(tau) e^{-i w tau} dtau = conj F(w + i0+).
    cplx full_ft(double w) const;

    double horizon() const noexcept { return horizon_; }

    struct Partial {
        std::vector<cplx> u; // u(t, w_j)
        std::vector<cplx> v; // v(t, w_j)
    };
    // Partial transforms for every (t_i, w_j); result[i] belongs to times[i].
    std::vector<Partial> partial(const std::vector<double>& times, const std::vector<double>& omegas) const;
    std::pair<cplx, cplx> partial(double t, double w) const;

private:
    void evaluate(double t, double* u, double* du, double* ddu) const;

    std::shared_ptr<const Susceptibility> chi_;
    std::vector<double> c_imf_, c_wimf_, c_wwimf_; // Legendre coefficients on chi grid
    double slope0_{0.0};
    std::vector<double> times_, u_, du_, ddu_;

    // time-domain table for the partial transforms
    double horizon_{0.0};
    double step_{0.5};
    std::vector<double> cu_, cdu_; // per tau-panel Legendre coefficients
};

// Functional interface.
double gamma_eval(const SpectralDensity& spec, double w);
cplx gamma_continuation(const SpectralDensity& spec, cplx z);
cplx susceptibility_eval(const Susceptibility& chi, double w);
ClassicalResponse classical_u(std::shared_ptr<const Susceptibility> chi, const std::vector<double>& times);
std::pair<cplx, cplx> partial_ft(const ClassicalResponse& resp, double t, double w);
cplx full_ft(const ClassicalResponse& resp, double w);
PoleReport pole_scan(const Susceptibility& chi);

} // namespace oscbath
