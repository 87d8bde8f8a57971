// oracle.hpp: finite-N brute force. Each bath is replaced by N oscillators,
// the quadratic Hamiltonian
//   H = P^2/2 + Omega^2 Q^2/2 + sum_nu [p_nu^2/2 + w_nu^2 (q_nu - lambda_nu Q / w_nu^2)^2 / 2]
// is diagonalised once, and first and second moments are propagated exactly.

#pragma once

#include "oscbath/correlations.hpp"
#include "oscbath/genfunc.hpp"
#include "oscbath/scenario.hpp"

#include <Eigen/Dense>

#include <vector>

namespace oscbath {

struct DiscreteBath {
    std::vector<double> omega, weight, lambda; // lambda^2 = w gamma(w) weight
};

// Drude modes: a fraction of them uniformly spaced on [0, dense_extent scale], the rest on
// a Gauss-Legendre grid in log w up to top wc. The dense spacing sets the recurrence time;
// a wider dense region resolves short-time transients better.
struct ModeLayout {
    double dense_extent{5.0};
    double dense_fraction{2.0 / 3.0};
    double top{50.0};

    // transients on t <= 50 at Omega = 1, wc = 10 with 300 modes per bath
    static ModeLayout transient() { return {30.0, 0.9, 5.0}; }
};

// Tabulated spectra use the midpoint rule on their support.
DiscreteBath discretize(const SpectralDensity& spec, std::size_t n, double scale, const ModeLayout& layout = {});

struct OracleOptions {
    std::size_t modes_per_bath{250};
    std::size_t max_modes{5000};
    ModeLayout layout{};
};

class Oracle {
public:
    Oracle(double omega0, std::vector<Bath> baths, const MomentState& init, OracleOptions opts = {});

    std::size_t dof() const noexcept { return n_; }
    // Normal-mode frequencies in ascending order.
    const Eigen::VectorXd& normal_frequencies() const noexcept { return W_; }
    const std::vector<DiscreteBath>& discrete() const noexcept { return disc_; }
    // 2 pi over the mode spacing next to Omega, minimised over baths.
    double recurrence_time() const noexcept { return recurrence_; }

    // max |M J M^T - J| of the phase-space propagator at t.
    double symplectic_error(double t) const;

    // Classical response u(t) = dQ(t)/dP(0).
    double u(double t) const;
    // Central-oscillator moments at t.
    MomentState system_state(double t) const;
    // <{Q(t), Q(t+s)}>/2 and <[Q(t), Q(t+s)]>/i.
    TwoTime correlation(double t, double s) const;
    // <H_B^a(t)> with H_B^a = sum (p^2 + w^2 q^2)/2 over the modes of bath a.
    double bath_energy(std::size_t a, double t) const;
    // -d<H_B^a>/dt, positive when energy leaves bath a.
    double current(std::size_t a, double t) const;
    // <H> of the closed system.
    double total_energy(double t) const;
    // First moment of W = H_B^a(0) - H_B^a(t).
    double work_mean(std::size_t a, double t) const;

private:
    struct Evolved {
        Eigen::VectorXd y, pi;                 // normal-mode means
        Eigen::MatrixXd yy, ypi, piy, pipi;    // normal-mode covariance blocks
    };
    Evolved evolve(double t) const;
    Eigen::MatrixXd evolve_cross(double t, double s) const; // Cov_sym(y(t), y(t+s)) in normal modes
    std::size_t offset(std::size_t a) const { return offsets_.at(a); }

    double omega0_;
    std::size_t n_{0};
    std::vector<DiscreteBath> disc_;
    std::vector<std::size_t> offsets_;
    double recurrence_{0.0};
    Eigen::MatrixXd O_;       // V = O diag(W^2) O^T
    Eigen::VectorXd W_;
    Eigen::VectorXd x0_, p0_; // normal-mode initial means
    Eigen::MatrixXd s_yy_, s_ypi_, s_pipi_;
    std::vector<Eigen::MatrixXd> energy_q_, energy_p_; // O^T diag(mask w^2) O and O^T diag(mask) O
    std::vector<Eigen::VectorXd> current_row_;         // sum_nu lambda_nu O_nu
};

} // namespace oscbath
