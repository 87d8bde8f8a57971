#include "oscbath/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oscbath::quad {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussRule rule;
    rule.x.resize(static_cast<std::size_t>(n));
    rule.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                // one more pass for the derivative at the converged node
                p0 = 1.0; p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1) { p1 = x; p0 = 1.0; }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[static_cast<std::size_t>(i)] = -x;
        rule.x[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.w[static_cast<std::size_t>(i)] = w;
        rule.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.x[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

void legendre_values(int n, double x, double* out) {
    if (n <= 0) return;
    out[0] = 1.0;
    if (n == 1) return;
    out[1] = x;
    for (int k = 1; k + 1 < n; ++k)
        out[k + 1] = ((2.0 * k + 1.0) * x * out[k] - k * out[k - 1]) / (k + 1.0);
}

namespace {

void spherical_bessel_nonneg(int n, double x, double* out) {
    if (x < 1e-300) {
        out[0] = 1.0;
        for (int k = 1; k < n; ++k) out[k] = 0.0;
        return;
    }
    const double s = std::sin(x), c = std::cos(x);
    if (x > n) {
        // upward recurrence is stable for x above the order
        out[0] = s / x;
        if (n > 1) out[1] = s / (x * x) - c / x;
        for (int k = 1; k + 1 < n; ++k) out[k + 1] = (2.0 * k + 1.0) / x * out[k] - out[k - 1];
        return;
    }
    // Miller's downward recurrence, normalised with sum (2k+1) j_k^2 = 1
    const int start = n + 30 + static_cast<int>(x);
    double f_next = 0.0, f = 1e-30, norm = 0.0;
    for (int k = start; k >= 0; --k) {
        if (k < n) out[k] = f;
        norm += (2.0 * k + 1.0) * f * f;
        if (k == 0) break;
        const double f_prev = (2.0 * k + 1.0) / x * f - f_next;
        f_next = f;
        f = f_prev;
        if (std::abs(f) > 1e100) {
            const double r = 1e-100;
            f *= r;
            f_next *= r;
            norm *= r * r;
            for (int j = k; j < n; ++j) out[j] *= r;
        }
    }
    double scale = 1.0 / std::sqrt(norm);
    // fix the overall sign from the larger of the closed-form j_0, j_1
    const double j0 = s / x;
    const double j1 = s / (x * x) - c / x;
    if (std::abs(j0) >= std::abs(j1)) {
        if ((j0 < 0) != (out[0] < 0)) scale = -scale;
    } else if (n > 1) {
        if ((j1 < 0) != (out[1] < 0)) scale = -scale;
    }
    for (int k = 0; k < n; ++k) out[k] *= scale;
}

} // namespace

void spherical_bessel(int n, double x, double* out) {
    if (n <= 0) return;
    spherical_bessel_nonneg(n, std::abs(x), out);
    if (x < 0)
        for (int k = 1; k < n; k += 2) out[k] = -out[k];
}

PanelGrid::PanelGrid(std::vector<double> edges, int order) : order_(order), edges_(std::move(edges)) {
    if (order_ < 2) throw std::invalid_argument("PanelGrid: order must be at least 2");
    if (edges_.size() < 2) throw std::invalid_argument("PanelGrid: need at least one panel");
    for (std::size_t i = 1; i < edges_.size(); ++i)
        if (!(edges_[i] > edges_[i - 1])) throw std::invalid_argument("PanelGrid: edges must increase");

    const GaussRule rule = gauss_legendre(order_);
    const auto n = static_cast<std::size_t>(order_);
    projection_.assign(n * n, 0.0);
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) {
        legendre_values(order_, rule.x[j], p.data());
        for (std::size_t k = 0; k < n; ++k) projection_[k * n + j] = (2.0 * k + 1.0) / 2.0 * rule.w[j] * p[k];
    }
    nodes_.reserve(panel_count() * n);
    weights_.reserve(panel_count() * n);
    for (std::size_t q = 0; q < panel_count(); ++q) {
        const double a = edges_[q], b = edges_[q + 1];
        const double m = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t j = 0; j < n; ++j) {
            nodes_.push_back(m + h * rule.x[j]);
            weights_.push_back(h * rule.w[j]);
        }
    }
}

double PanelGrid::integrate(std::span<const double> f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * f[i];
    return s;
}

cplx PanelGrid::integrate(std::span<const cplx> f) const {
    cplx s = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * f[i];
    return s;
}

namespace {
template <class T>
std::vector<T> expand_impl(const std::vector<double>& projection, std::size_t panels, std::size_t n,
                           std::span<const T> f) {
    std::vector<T> c(panels * n, T{});
    for (std::size_t q = 0; q < panels; ++q) {
        const T* fq = f.data() + q * n;
        T* cq = c.data() + q * n;
        for (std::size_t k = 0; k < n; ++k) {
            T s{};
            const double* row = projection.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) s += row[j] * fq[j];
            cq[k] = s;
        }
    }
    return c;
}
} // namespace

std::vector<double> PanelGrid::expand(std::span<const double> f) const {
    return expand_impl<double>(projection_, panel_count(), static_cast<std::size_t>(order_), f);
}

std::vector<cplx> PanelGrid::expand(std::span<const cplx> f) const {
    return expand_impl<cplx>(projection_, panel_count(), static_cast<std::size_t>(order_), f);
}

std::vector<cplx> PanelGrid::fourier_factors(double t) const {
    const auto n = static_cast<std::size_t>(order_);
    std::vector<cplx> fac(panel_count() * n);
    std::vector<double> j(n);
    static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t q = 0; q < panel_count(); ++q) {
        const double a = edges_[q], b = edges_[q + 1];
        const double m = 0.5 * (a + b), h = 0.5 * (b - a);
        spherical_bessel(order_, h * t, j.data());
        const cplx phase = std::polar(h, m * t);
        for (std::size_t k = 0; k < n; ++k) fac[q * n + k] = phase * (2.0 * j[k]) * ipow[k % 4];
    }
    return fac;
}

cplx PanelGrid::apply(std::span<const cplx> factors, std::span<const double> coeffs) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < factors.size(); ++i) s += factors[i] * coeffs[i];
    return s;
}

cplx PanelGrid::apply(std::span<const cplx> factors, std::span<const cplx> coeffs) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < factors.size(); ++i) s += factors[i] * coeffs[i];
    return s;
}

cplx PanelGrid::fourier(std::span<const double> f, double t) const {
    const auto c = expand(f);
    return apply(fourier_factors(t), c);
}

cplx PanelGrid::fourier(std::span<const cplx> f, double t) const {
    const auto c = expand(f);
    return apply(fourier_factors(t), c);
}

std::vector<double> PanelGrid::sample(const std::function<double(double)>& g) const {
    std::vector<double> v(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) v[i] = g(nodes_[i]);
    return v;
}

PanelGrid PanelGrid::refined(double max_width) const {
    if (!(max_width > 0)) throw std::invalid_argument("PanelGrid::refined: width must be positive");
    std::vector<double> e{edges_.front()};
    for (std::size_t q = 0; q + 1 < edges_.size(); ++q) {
        const double a = edges_[q], b = edges_[q + 1];
        const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / max_width));
        for (std::size_t k = 1; k < pieces; ++k) e.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
        e.push_back(b);
    }
    return PanelGrid(std::move(e), order_);
}

double PanelGrid::tail_ratio(std::span<const double> f) const {
    double scale = 0.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    const auto c = expand(f);
    const auto n = static_cast<std::size_t>(order_);
    double worst = 0.0;
    for (std::size_t q = 0; q < panel_count(); ++q)
        worst = std::max({worst, std::abs(c[q * n + n - 1]), std::abs(c[q * n + n - 2])});
    return worst / scale;
}

PanelGrid build_adaptive_grid(const GridSpec& spec, const std::vector<std::function<double(double)>>& features,
                              GridDiagnostics* diagnostics) {
    if (!(spec.omega_max > 0)) throw std::invalid_argument("build_adaptive_grid: omega_max must be positive");
    const int n = spec.order;
    const GaussRule rule = gauss_legendre(n);
    const double width = spec.max_width > 0 ? spec.max_width : spec.omega_max / 64.0;

    std::vector<double> cuts{0.0, spec.omega_max};
    for (double b : spec.breakpoints)
        if (b > 0.0 && b < spec.omega_max) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double a, double b) { return std::abs(a - b) <= 1e-12 * spec.omega_max; }),
               cuts.end());

    std::vector<double> initial{0.0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / width)));
        for (std::size_t k = 1; k <= pieces; ++k) initial.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
    }
    initial.back() = spec.omega_max;
    double w = spec.omega_max;
    for (int k = 0; k < spec.tail_octaves; ++k) {
        w *= 2.0;
        initial.push_back(w);
    }

    // projection rows for the two trailing coefficients
    std::vector<double> p(static_cast<std::size_t>(n));
    std::vector<double> row_last(static_cast<std::size_t>(n)), row_prev(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        legendre_values(n, rule.x[static_cast<std::size_t>(j)], p.data());
        row_last[static_cast<std::size_t>(j)] = (2.0 * (n - 1) + 1.0) / 2.0 * rule.w[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(n - 1)];
        row_prev[static_cast<std::size_t>(j)] = (2.0 * (n - 2) + 1.0) / 2.0 * rule.w[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(n - 2)];
    }

    // global scale of every feature over the initial partition
    std::vector<double> scale(features.size(), 0.0);
    for (std::size_t q = 0; q + 1 < initial.size(); ++q) {
        const double m = 0.5 * (initial[q] + initial[q + 1]), h = 0.5 * (initial[q + 1] - initial[q]);
        for (int j = 0; j < n; ++j) {
            const double x = m + h * rule.x[static_cast<std::size_t>(j)];
            for (std::size_t f = 0; f < features.size(); ++f) scale[f] = std::max(scale[f], std::abs(features[f](x)));
        }
    }

    auto panel_error = [&](double a, double b) {
        const double m = 0.5 * (a + b), h = 0.5 * (b - a);
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) xs[static_cast<std::size_t>(j)] = m + h * rule.x[static_cast<std::size_t>(j)];
        double worst = 0.0;
        for (std::size_t f = 0; f < features.size(); ++f) {
            double cl = 0.0, cp = 0.0;
            for (int j = 0; j < n; ++j) {
                const double v = features[f](xs[static_cast<std::size_t>(j)]);
                cl += row_last[static_cast<std::size_t>(j)] * v;
                cp += row_prev[static_cast<std::size_t>(j)] * v;
                // narrow features can hide between the initial nodes
                scale[f] = std::max(scale[f], std::abs(v));
            }
            if (scale[f] == 0.0) continue;
            worst = std::max(worst, std::max(std::abs(cl), std::abs(cp)) / scale[f]);
        }
        return worst;
    };

    GridDiagnostics diag;
    std::vector<double> edges{initial.front()};
    std::function<void(double, double, int)> split = [&](double a, double b, int depth) {
        const double err = panel_error(a, b);
        if (err <= spec.rel_tol || depth >= spec.max_depth) {
            if (err > spec.rel_tol) ++diag.unresolved_panels;
            diag.achieved_rel_tol = std::max(diag.achieved_rel_tol, err);
            edges.push_back(b);
            return;
        }
        const double m = 0.5 * (a + b);
        split(a, m, depth + 1);
        split(m, b, depth + 1);
    };
    for (std::size_t q = 0; q + 1 < initial.size(); ++q) split(initial[q], initial[q + 1], 0);

    if (diagnostics) *diagnostics = diag;
    return PanelGrid(std::move(edges), n);
}

} // namespace oscbath::quad
