// preparations.hpp: Gaussian initial states of a bath in the thermodynamic
// limit, resolved in frequency.
//
// A preparation carries the mean kernels X_Q(w), X_P(w), the diagonal second
// moments sigma_QQ, sigma_QP, sigma_PP (per mode) and an optional off-diagonal
// kernel sigma2(w1, w2) with compact support. Means and sigma2 are normalised
// against the coupling density sqrt(w gamma(w)).

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oscbath {

using ScalarFn = std::function<double(double)>;
// Row-major 2x2 block (QQ, QP, PQ, PP).
using Block2 = std::array<double, 4>;

// (w/2) coth(w/2T); T at w = 0.
double thermal_energy(double w, double T);
// 1/(exp(w/T) - 1), the Bose occupation.
double bose_occupation(double w, double T);

struct Sigma2Kernel {
    std::function<Block2(double, double)> value;
    double lower{0.0}; // support box [lower, upper]^2
    double upper{0.0};
};

// Piecewise-linear table with zero extension, shared by custom kernels.
class Table {
public:
    Table() = default;
    Table(std::vector<double> grid, std::vector<double> values);
    double operator()(double w) const;
    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> grid_, values_;
};

class BathPreparation {
public:
    enum class Kind { Thermal, SqueezedThermal, DisplacedThermal, Custom };

    struct CustomSpec {
        ScalarFn mean_q, mean_p;          // default: zero
        ScalarFn sigma_qq, sigma_qp, sigma_pp;
        std::optional<Sigma2Kernel> sigma2;
        // Optional E(w) - w/2, for accuracy where E approaches the ground state.
        ScalarFn excess;
        // Frequencies at which positivity is checked (in addition to an internal grid).
        std::vector<double> check_grid;
        double check_max{0.0};            // upper end of the internal check grid
        std::vector<double> breakpoints;  // kinks of tabulated kernels
    };

    static BathPreparation thermal(double T);
    static BathPreparation squeezed_thermal(double T, double r);
    static BathPreparation squeezed_thermal(double T, ScalarFn r);
    static BathPreparation displaced_thermal(double T, ScalarFn mean_q, ScalarFn mean_p);
    static BathPreparation custom(CustomSpec spec);

    Kind kind() const noexcept { return kind_; }
    std::string kind_name() const;
    double temperature() const noexcept { return T_; } // NaN for custom
    bool thermal_second_moments() const noexcept { return kind_ == Kind::Thermal || kind_ == Kind::DisplacedThermal; }

    double mean_q(double w) const;
    double mean_p(double w) const;
    bool has_means() const noexcept { return static_cast<bool>(mean_q_) || static_cast<bool>(mean_p_); }

    double sigma_qq(double w) const;
    double sigma_qp(double w) const;
    double sigma_pp(double w) const;
    // E(w) = (w^2 sigma_QQ + sigma_PP)/2 and the same minus w/2.
    double energy(double w) const;
    double excess_energy(double w) const;
    // w^2 sigma_QQ and sigma_PP, finite at w = 0.
    double scaled_qq(double w) const;

    bool has_sigma2() const noexcept { return sigma2_.has_value(); }
    const std::optional<Sigma2Kernel>& sigma2() const noexcept { return sigma2_; }

    std::vector<double> breakpoints() const { return breakpoints_; }

    // Throws InvalidPreparation at the first frequency violating
    // sigma_QQ sigma_PP - sigma_QP^2 >= 1/4.
    void validate(const std::vector<double>& grid) const;

private:
    BathPreparation() = default;

    Kind kind_{Kind::Thermal};
    double T_{0.0};
    ScalarFn squeeze_;
    ScalarFn mean_q_, mean_p_;
    ScalarFn qq_, qp_, pp_, excess_;
    std::optional<Sigma2Kernel> sigma2_;
    std::vector<double> breakpoints_;
};

double energy_distribution(const BathPreparation& prep, double w);

struct PreparationParams {
    BathPreparation::Kind kind{BathPreparation::Kind::Thermal};
    double temperature{1.0};
    double squeeze{0.0};
    ScalarFn squeeze_fn;
    ScalarFn mean_q, mean_p;
    BathPreparation::CustomSpec custom;
};

// Builds and validates a preparation on the given check grid.
BathPreparation make_preparation(const PreparationParams& params, const std::vector<double>& check_grid = {});

// Nonthermal state with E(w) = E_th(w, T): w^2 sigma_QQ = sigma_PP = E_th and
// sigma_QP = c sqrt(n (n + 1)), |c| <= 1, n the Bose occupation.
BathPreparation effectively_thermal(double T, double c);

} // namespace oscbath
