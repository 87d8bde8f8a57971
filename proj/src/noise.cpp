#include "oscbath/noise.hpp"

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

#include <cmath>
#include <sstream>

namespace oscbath {

namespace {

void require_times(double t, double s) {
    if (!(t >= 0.0) || !(s >= 0.0)) throw DomainError("noise: times must be non-negative");
}

double cos_part(const quad::PanelGrid& g, const std::vector<double>& c, double t) {
    return quad::PanelGrid::apply(g.fourier_factors(t), c).real();
}

} // namespace

double friction_kernel(const SpectralDensity& spec, double t) {
    if (!(t >= 0.0)) throw DomainError("friction_kernel: t must be non-negative");
    if (spec.vanishes()) return 0.0;
    if (spec.kind() == SpectralDensity::Kind::Drude) return spec.kappa() * spec.cutoff() * std::exp(-spec.cutoff() * t);
    return friction_kernel_quadrature(spec, t);
}

double friction_kernel_quadrature(const SpectralDensity& spec, double t) {
    if (!(t >= 0.0)) throw DomainError("friction_kernel: t must be non-negative");
    if (spec.vanishes()) return 0.0;
    quad::GridSpec gs;
    const bool drude = spec.kind() == SpectralDensity::Kind::Drude;
    gs.omega_max = drude ? 50.0 * spec.cutoff() : spec.support_end();
    gs.tail_octaves = drude ? 26 : 0;
    gs.breakpoints = spec.breakpoints();
    gs.rel_tol = 1e-13;
    const auto g = quad::build_adaptive_grid(gs, {[&spec](double w) { return spec(w) / w; }});
    const auto f = g.sample([&spec](double w) { return spec(w) / w; });
    return g.fourier(f, t).real();
}

NoiseKernel::NoiseKernel(const Scenario& sc, std::size_t bath) : sc_(&sc), a_(bath) {
    if (bath >= sc.size()) throw DomainError("noise: bath index out of range");
    const auto& w = sc.nodes();
    const auto& p = sc.baths()[a_].preparation;
    const auto& gam = sc.gamma(a_);
    std::vector<double> fe(w.size()), fd(w.size()), fc(w.size()), fq(w.size()), fp(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = w[i], g = gam[i];
        fe[i] = g * sc.energy(a_)[i] / x;
        fd[i] = 0.5 * g * (p.scaled_qq(x) - p.sigma_pp(x)) / x;
        fc[i] = g * p.sigma_qp(x);
        fq[i] = std::sqrt(x * g) * p.mean_q(x);
        fp[i] = std::sqrt(g / x) * p.mean_p(x);
    }
    const auto& grid = sc.grid();
    ce_ = grid.expand(fe);
    cd_ = grid.expand(fd);
    cc_ = grid.expand(fc);
    cq_ = grid.expand(fq);
    cp_ = grid.expand(fp);
}

double noise_mean(const NoiseKernel& k, double t) {
    require_times(t, 0.0);
    if (!k.scenario().baths()[k.bath()].preparation.has_means()) return 0.0;
    const auto& g = k.scenario().grid();
    const auto f = g.fourier_factors(t);
    return quad::PanelGrid::apply(f, k.mean_q_coeffs()).real() + quad::PanelGrid::apply(f, k.mean_p_coeffs()).imag();
}

double noise_stationary(const NoiseKernel& k, double s) {
    return cos_part(k.scenario().grid(), k.energy_coeffs(), std::abs(s));
}

double noise_correlation(const NoiseKernel& k, double t, double s) {
    require_times(t, s);
    const auto& sc = k.scenario();
    const auto& g = sc.grid();
    const auto fs = g.fourier_factors(t + s);
    double v = cos_part(g, k.energy_coeffs(), std::abs(t - s)) + quad::PanelGrid::apply(fs, k.squeeze_coeffs()).real() +
               quad::PanelGrid::apply(fs, k.cross_coeffs()).imag();
    const auto& prep = sc.baths()[k.bath()].preparation;
    if (!prep.has_sigma2()) return v;
    const auto& ker = *prep.sigma2();
    const std::size_t n = sc.sigma2_nodes(k.bath(), std::max(t, s));
    if (n * n > sc.options().sigma2_budget) {
        std::ostringstream os;
        os << "sigma2 double quadrature needs " << n * n << " evaluations, budget is " << sc.options().sigma2_budget;
        throw BudgetExceeded(os.str());
    }
    std::vector<double> edges(n / 20 + 1);
    for (std::size_t q = 0; q < edges.size(); ++q)
        edges[q] = ker.lower + (ker.upper - ker.lower) * static_cast<double>(q) / static_cast<double>(edges.size() - 1);
    const quad::PanelGrid box(edges, 20);
    const auto& w = box.nodes();
    const auto& spec = sc.baths()[k.bath()].spectrum;
    // sqrt(w gamma) (cos wt, sin(wt)/w) times the quadrature weight
    std::vector<Vec2> m1(w.size()), m2(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double c = std::sqrt(w[i] * spec(w[i])) * box.weights()[i];
        m1[i] = c * Vec2(std::cos(w[i] * t), std::sin(w[i] * t) / w[i]);
        m2[i] = c * Vec2(std::cos(w[i] * s), std::sin(w[i] * s) / w[i]);
    }
    std::vector<double> rows(w.size(), 0.0);
    parallel_for(w.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            const Block2 b = ker.value(w[i], w[j]);
            Mat2 sig;
            sig << b[0], b[1], b[2], b[3];
            acc += m1[i].dot(sig * m2[j]);
        }
        rows[i] = acc;
    });
    for (double r : rows) v += r;
    return v;
}

double noise_cross_correlation(const NoiseKernel& a, const NoiseKernel& b, double t, double s) {
    require_times(t, s);
    if (&a.scenario() != &b.scenario()) throw DomainError("noise: kernels belong to different scenarios");
    if (a.bath() == b.bath()) return noise_correlation(a, t, s);
    return 0.0;
}

double slip_correlation(const NoiseKernel& k, double sigma_qq0, double t, double s) {
    const double base = noise_correlation(k, t, s);
    if (sigma_qq0 == 0.0) return base;
    const auto& spec = k.scenario().baths()[k.bath()].spectrum;
    return base + sigma_qq0 * friction_kernel(spec, t) * friction_kernel(spec, s);
}

} // namespace oscbath
