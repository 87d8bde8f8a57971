// quadrature.hpp: composite Gauss-Legendre panels with Legendre-product (Filon
// type) evaluation of Fourier integrals.
//
// A PanelGrid is a partition of a frequency (or time) interval into panels,
// each carrying the same Gauss-Legendre rule. Smooth functions sampled at the
// nodes are expanded per panel in Legendre polynomials; the Fourier integral
// of an expansion is exact through
//
//     int_{-1}^{1} P_k(x) exp(i lambda x) dx = 2 i^k j_k(lambda),
//
// so the accuracy of  int f(w) exp(i w t) dw  does not degrade with t.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace oscbath::quad {

using cplx = std::complex<double>;

struct GaussRule {
    std::vector<double> x; // nodes on [-1, 1], ascending
    std::vector<double> w;
};

GaussRule gauss_legendre(int n);

// Legendre polynomials P_0..P_{n-1} at x.
void legendre_values(int n, double x, double* out);

// Spherical Bessel functions j_0..j_{n-1} at x (any sign).
void spherical_bessel(int n, double x, double* out);

class PanelGrid {
public:
    PanelGrid() = default;
    PanelGrid(std::vector<double> edges, int order);

    int order() const noexcept { return order_; }
    std::size_t panel_count() const noexcept { return edges_.empty() ? 0 : edges_.size() - 1; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    const std::vector<double>& edges() const noexcept { return edges_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double lower() const { return edges_.front(); }
    double upper() const { return edges_.back(); }

    double integrate(std::span<const double> f) const;
    cplx integrate(std::span<const cplx> f) const;

    // Per-panel Legendre coefficients (panel-major, order() per panel).
    std::vector<double> expand(std::span<const double> f) const;
    std::vector<cplx> expand(std::span<const cplx> f) const;

    // Factors such that  int f(w) e^{i w t} dw = sum_i factors[i] * coeffs[i].
    std::vector<cplx> fourier_factors(double t) const;

    static cplx apply(std::span<const cplx> factors, std::span<const double> coeffs);
    static cplx apply(std::span<const cplx> factors, std::span<const cplx> coeffs);

    // int f(w) e^{i w t} dw for samples f at the nodes.
    cplx fourier(std::span<const double> f, double t) const;
    cplx fourier(std::span<const cplx> f, double t) const;

    // Samples g(w) at all nodes.
    std::vector<double> sample(const std::function<double(double)>& g) const;

    // Same partition with every panel split so no panel is wider than max_width.
    PanelGrid refined(double max_width) const;

    // Largest relative size of the two trailing Legendre coefficients of f over
    // all panels, relative to max |f|; a resolution diagnostic.
    double tail_ratio(std::span<const double> f) const;

private:
    int order_{0};
    std::vector<double> edges_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> projection_; // order x order, row k: (2k+1)/2 w_j P_k(x_j)
};

struct GridSpec {
    double omega_max{0.0};           // end of the dense region
    int order{20};                   // nodes per panel
    double rel_tol{1e-13};           // trailing Legendre coefficient bound
    int max_depth{40};               // bisection limit per initial panel
    int tail_octaves{12};            // geometric panels [W 2^k, W 2^{k+1}] beyond omega_max
    double max_width{0.0};           // initial panel width cap in [0, omega_max] (0: omega_max/64)
    std::vector<double> breakpoints; // forced panel edges (kinks of tabulated data)
};

struct GridDiagnostics {
    double achieved_rel_tol{0.0};
    std::size_t unresolved_panels{0};
};

// Adaptive partition of [0, omega_max * 2^tail_octaves]: panels are bisected
// until every feature is resolved to rel_tol (relative to its own maximum).
PanelGrid build_adaptive_grid(const GridSpec& spec,
                              const std::vector<std::function<double(double)>>& features,
                              GridDiagnostics* diagnostics = nullptr);

} // namespace oscbath::quad
