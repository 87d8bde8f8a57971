// scenario.hpp: central oscillator plus an ordered list of prepared baths, and
// the frequency-grid machinery shared by the time-dependent modules.
//
// Integrals of the form  int dw W(w) U(t1, w) ... U(t2, w)  are evaluated in
// phase form: with u(t, w) = e^{iwt} conj F(w) + B(t, w), every entry of
// U(t, w) = [[u_R, u_I/w], [v_R, v_I/w]] reads 2 Re(p e^{iwt}) + p0 with p
// independent of t and p0 smooth in w. Products then split into the phases
// t1 + t2, t1 - t2, t1, t2 and 0, each integrated exactly against the
// Legendre expansion of its smooth amplitude.

#pragma once

#include "oscbath/preparations.hpp"
#include "oscbath/spectral.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

namespace oscbath {

struct Bath {
    SpectralDensity spectrum;
    BathPreparation preparation;
};

struct ScenarioOptions {
    SusceptibilityOptions chi;
    double rel_tol{1e-12};                    // grid resolution of preparation features
    int max_depth{30};
    std::size_t sigma2_budget{10'000'000};    // integrand evaluations per double integral
};

// Double quadrature over a sigma2 support box would exceed the budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// U(t, w) at the scenario grid nodes in phase form.
struct ModeMatrices {
    double t{0.0};
    std::vector<std::array<cplx, 4>> p;    // row-major entries
    std::vector<std::array<double, 4>> p0;
};

class Scenario {
public:
    Scenario(double omega0, std::vector<Bath> baths, ScenarioOptions opts = {});

    double omega0() const noexcept { return omega0_; }
    const std::vector<Bath>& baths() const noexcept { return baths_; }
    std::size_t size() const noexcept { return baths_.size(); }
    const ScenarioOptions& options() const noexcept { return opts_; }

    const Susceptibility& susceptibility() const noexcept { return *chi_; }
    std::shared_ptr<const Susceptibility> susceptibility_ptr() const noexcept { return chi_; }

    // Grid resolving F and all preparation kernels, with cached node data.
    const quad::PanelGrid& grid() const noexcept { return grid_; }
    const quad::GridDiagnostics& grid_diagnostics() const noexcept { return diag_; }
    const std::vector<double>& nodes() const noexcept { return grid_.nodes(); }
    const std::vector<cplx>& F() const noexcept { return F_; }
    const std::vector<double>& gamma(std::size_t a) const { return gamma_.at(a); }
    const std::vector<double>& energy(std::size_t a) const { return energy_.at(a); }
    const std::vector<double>& excess(std::size_t a) const { return excess_.at(a); }
    // sum_a w gamma_a Sigma1_a, row-major, per node
    const std::vector<std::array<double, 4>>& covariance_weight() const noexcept { return weight_; }
    const std::vector<std::array<double, 4>>& covariance_weight(std::size_t a) const { return weight_a_.at(a); }
    // sum_a sqrt(w gamma_a) X_a, per node
    const std::vector<std::array<double, 2>>& mean_weight() const noexcept { return means_; }
    bool has_means() const noexcept { return has_means_; }
    bool has_sigma2() const noexcept;

    // Response with partial transforms available up to at least `horizon`.
    std::shared_ptr<const ClassicalResponse> response(double horizon) const;

    std::vector<ModeMatrices> mode_matrices(const std::vector<double>& times) const;
    ModeMatrices mode_matrices(double t) const;

    // int dw sum_kl W_kl(w) M_ik(a, w) M_jl(b, w) for all i, j.
    Mat2 contract(const ModeMatrices& a, const ModeMatrices& b, const std::vector<std::array<double, 4>>& weight) const;
    // int dw sum_k M_ik(a, w) x_k(w).
    Vec2 apply(const ModeMatrices& a, const std::vector<std::array<double, 2>>& x) const;

    // sum_a int int sqrt(w1 g1 w2 g2) M(t1, w1) sigma2_a(w1, w2) M(t2, w2)^T over
    // each support box; zero if no bath carries sigma2.
    Mat2 sigma2_contract(double t1, double t2) const;
    // Node count per axis used for the sigma2 box of bath a at times up to t.
    std::size_t sigma2_nodes(std::size_t a, double t) const;

private:
    double omega0_;
    std::vector<Bath> baths_;
    ScenarioOptions opts_;
    std::shared_ptr<const Susceptibility> chi_;
    quad::PanelGrid grid_;
    quad::GridDiagnostics diag_;
    std::vector<cplx> F_;
    std::vector<std::vector<double>> gamma_, energy_, excess_;
    std::vector<std::array<double, 4>> weight_;
    std::vector<std::vector<std::array<double, 4>>> weight_a_;
    std::vector<std::array<double, 2>> means_;
    bool has_means_{false};

    mutable std::mutex mutex_;
    mutable std::shared_ptr<const ClassicalResponse> response_;
};

} // namespace oscbath
