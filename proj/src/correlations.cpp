#include "oscbath/correlations.hpp"

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace oscbath {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive(double w, const char* what) {
    if (!(w > 0.0)) throw DomainError(std::string(what) + ": frequency must be positive");
}

} // namespace

std::vector<double> psi_spectrum_terms(const Scenario& sc, double w) {
    require_positive(w, "psi_spectrum");
    const double u2 = std::norm(sc.susceptibility().boundary(w));
    std::vector<double> out;
    for (const auto& b : sc.baths()) out.push_back(pi * b.spectrum(w) * u2 * b.preparation.energy(w) / w);
    return out;
}

double psi_spectrum(const Scenario& sc, double w) {
    double s = 0.0;
    for (double x : psi_spectrum_terms(sc, w)) s += x;
    return s;
}

double phi_spectrum(const Scenario& sc, double w) {
    require_positive(w, "phi_spectrum");
    const auto& chi = sc.susceptibility();
    return pi * chi.gamma_sum(w) * std::norm(chi.boundary(w));
}

CorrelationResult stationary_correlations(const Scenario& sc, const std::vector<double>& lags,
                                          const std::vector<double>& omegas) {
    const auto& g = sc.grid();
    const auto& w = sc.nodes();
    std::vector<double> fpsi(w.size(), 0.0), fphi(w.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double u2 = std::norm(sc.F()[i]);
        for (std::size_t a = 0; a < sc.size(); ++a) {
            fpsi[i] += sc.gamma(a)[i] * u2 * sc.energy(a)[i] / w[i];
            fphi[i] += sc.gamma(a)[i] * u2;
        }
    }
    const auto cpsi = g.expand(fpsi), cphi = g.expand(fphi);
    CorrelationResult r;
    r.lags = lags;
    r.psi.resize(lags.size());
    r.phi.resize(lags.size());
    parallel_for(lags.size(), [&](std::size_t k) {
        const auto f = g.fourier_factors(lags[k]);
        r.psi[k] = quad::PanelGrid::apply(f, cpsi).real();
        r.phi[k] = quad::PanelGrid::apply(f, cphi).imag();
    });
    r.omegas = omegas;
    for (double x : omegas) {
        r.psi_w.push_back(psi_spectrum(sc, x));
        r.phi_w.push_back(phi_spectrum(sc, x));
    }
    return r;
}

std::vector<TwoTime> finite_time_correlations(const Scenario& sc, const MomentState& init,
                                              const std::vector<std::pair<double, double>>& points) {
    init.validate();
    std::vector<double> times;
    for (const auto& [t, s] : points) {
        if (!(t >= 0.0) || !(t + s >= 0.0)) throw DomainError("finite_time_correlations: need t >= 0 and t + s >= 0");
        times.push_back(t);
        times.push_back(t + s);
    }
    const auto props = propagators(sc, times);
    const auto modes = sc.mode_matrices(times);
    // antisymmetric weight: w gamma_sum (M_00 M'_01 - M_01 M'_00)
    const auto& w = sc.nodes();
    std::vector<std::array<double, 4>> anti(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double g = 0.0;
        for (std::size_t a = 0; a < sc.size(); ++a) g += sc.gamma(a)[i];
        anti[i] = {0.0, w[i] * g, -w[i] * g, 0.0};
    }
    std::vector<TwoTime> out(points.size());
    parallel_for(points.size(), [&](std::size_t k) {
        const auto& p1 = props[2 * k];
        const auto& p2 = props[2 * k + 1];
        const auto& m1 = modes[2 * k];
        const auto& m2 = modes[2 * k + 1];
        const auto x1 = propagate(p1, init), x2 = propagate(p2, init);
        TwoTime& r = out[k];
        r.t = points[k].first;
        r.s = points[k].second;
        // central-oscillator terms
        const double sys = (p1.U * init.Sigma * p2.U.transpose())(0, 0);
        Mat2 bath = Mat2::Zero();
        if (m1.t > 0.0 && m2.t > 0.0) {
            bath = sc.contract(m1, m2, sc.covariance_weight());
            if (sc.has_sigma2()) bath += sc.sigma2_contract(m1.t, m2.t);
        }
        r.psi = x1.X(0) * x2.X(0) + sys + bath(0, 0);
        const double u1 = p1.U(0, 1), du1 = p1.U(0, 0), u2 = p2.U(0, 1), du2 = p2.U(0, 0);
        r.phi = du1 * u2 - u1 * du2;
        if (m1.t > 0.0 && m2.t > 0.0) r.phi += sc.contract(m1, m2, anti)(0, 0);
    });
    return out;
}

TwoTime finite_time_correlations(const Scenario& sc, const MomentState& init, double t, double s) {
    return finite_time_correlations(sc, init, std::vector<std::pair<double, double>>{{t, s}}).front();
}

FdtReport fdt_check(const Scenario& sc, const std::vector<double>& omegas) {
    FdtReport r;
    r.omegas = omegas;
    for (double w : omegas) {
        require_positive(w, "fdt_check");
        double gs = 0.0, ge = 0.0;
        for (const auto& b : sc.baths()) {
            const double g = b.spectrum(w);
            gs += g;
            ge += g * b.preparation.energy(w);
        }
        if (!(gs > 0.0)) throw DomainError("fdt_check: gamma_sum vanishes on the grid");
        const double lhs = psi_spectrum(sc, w);
        const double rhs = ge / (w * gs) * phi_spectrum(sc, w);
        r.lhs.push_back(lhs);
        r.rhs.push_back(rhs);
        r.residual = std::max(r.residual, std::abs(lhs - rhs) / std::abs(lhs));
    }
    return r;
}

double equilibrium_fdt_residual(const Scenario& sc, const std::vector<double>& omegas, double T) {
    double worst = 0.0;
    for (double w : omegas) {
        const double lhs = psi_spectrum(sc, w);
        const double rhs = 0.5 / std::tanh(0.5 * w / T) * phi_spectrum(sc, w);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    return worst;
}

EffectiveTemperature effective_temperature(const Scenario& sc, double w) {
    require_positive(w, "effective_temperature");
    double gs = 0.0, gx = 0.0;
    for (const auto& b : sc.baths()) {
        const double g = b.spectrum(w);
        gs += g;
        gx += g * b.preparation.excess_energy(w);
    }
    EffectiveTemperature r;
    if (!(gs > 0.0)) return r;
    // (2/w) arcoth(1 + 2X/w) = log1p(w/X)/w with X the weighted excess over w/2
    const double x = gx / gs;
    if (!(x > 0.0)) return r;
    r.value = w / std::log1p(w / x);
    r.valid = std::isfinite(r.value);
    return r;
}

ThermalizationReport thermalization_check(const Scenario& sc, const std::vector<double>& omegas, double tol) {
    ThermalizationReport r;
    r.t_min = std::numeric_limits<double>::infinity();
    r.t_max = -std::numeric_limits<double>::infinity();
    for (double w : omegas) {
        const auto e = effective_temperature(sc, w);
        if (!e.valid) {
            ++r.invalid_points;
            continue;
        }
        r.t_min = std::min(r.t_min, e.value);
        r.t_max = std::max(r.t_max, e.value);
    }
    r.passed = r.invalid_points == 0 && !omegas.empty() && r.t_max - r.t_min < tol;
    return r;
}

} // namespace oscbath
