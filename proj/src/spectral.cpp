#include "oscbath/spectral.hpp"

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace oscbath {

namespace {

constexpr double pi = std::numbers::pi;

// log of (x - w - i0) for real x, w: the sheet reached from the upper half plane.
cplx log_below(double d) {
    if (d == 0.0) return 0.0; // paired terms cancel at shared table nodes
    return {std::log(std::abs(d)), d < 0 ? -pi : 0.0};
}

double log_abs(double d) { return d == 0.0 ? 0.0 : std::log(std::abs(d)); }

} // namespace

SpectralDensity SpectralDensity::drude(double kappa, double cutoff) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("drude: kappa must be non-negative");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw DomainError("drude: cutoff must be positive");
    SpectralDensity s;
    s.kind_ = Kind::Drude;
    s.kappa_ = kappa;
    s.cutoff_ = cutoff;
    return s;
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() != values.size()) throw DomainError("tabulated: grid and values differ in length");
    if (grid.size() < 2) throw DomainError("tabulated: need at least two points");
    if (!(grid.front() >= 0.0)) throw DomainError("tabulated: grid must start at w >= 0");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || !std::isfinite(values[i])) throw DomainError("tabulated: non-finite entry");
        if (values[i] < 0.0) throw DomainError("tabulated: gamma must be non-negative at w=" + std::to_string(grid[i]));
        if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("tabulated: grid must be strictly increasing");
    }
    if (grid.front() == 0.0 && values.front() != 0.0)
        throw DomainError("tabulated: gamma(0) must vanish so that gamma/w stays bounded");
    SpectralDensity s;
    s.kind_ = Kind::Tabulated;
    s.grid_ = std::move(grid);
    s.values_ = std::move(values);
    return s;
}

double SpectralDensity::operator()(double w) const {
    if (!(w >= 0.0)) throw DomainError("gamma: negative frequency");
    if (kind_ == Kind::Drude) {
        if (std::isinf(w)) return 0.0;
        return 2.0 / pi * kappa_ * w * cutoff_ * cutoff_ / (w * w + cutoff_ * cutoff_);
    }
    if (w < grid_.front() || w > grid_.back()) return 0.0;
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), w);
    const std::size_t i = it == grid_.end() ? grid_.size() - 2 : static_cast<std::size_t>(it - grid_.begin()) - 1;
    const double f = (w - grid_[i]) / (grid_[i + 1] - grid_[i]);
    return values_[i] + f * (values_[i + 1] - values_[i]);
}

cplx SpectralDensity::table_cauchy(cplx z, bool on_axis) const {
    // int w' gamma(w') / (z^2 - w'^2) dw' for piecewise-linear gamma = a + b w'
    const double w = z.real();
    auto f1 = [&](double x) -> cplx {
        if (on_axis) return -0.5 * (log_below(x - w) + log_abs(x + w));
        return -0.5 * (std::log(x - z) + std::log(x + z));
    };
    auto f2 = [&](double x) -> cplx {
        if (on_axis) return -x + 0.5 * w * (log_abs(x + w) - log_below(x - w));
        return -x + 0.5 * z * (std::log(x + z) - std::log(x - z));
    };
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double x0 = grid_[i], x1 = grid_[i + 1];
        const double b = (values_[i + 1] - values_[i]) / (x1 - x0);
        const double a = values_[i] - b * x0;
        if (a != 0.0) total += a * (f1(x1) - f1(x0));
        if (b != 0.0) total += b * (f2(x1) - f2(x0));
    }
    return total;
}

cplx SpectralDensity::continuation(cplx z) const {
    if (!(z.imag() > 0.0)) throw DomainError("continuation: requires Im z > 0");
    if (kind_ == Kind::Drude) return kappa_ * cutoff_ * z / (z + cplx(0.0, cutoff_));
    return table_cauchy(z, false);
}

cplx SpectralDensity::boundary(double w) const {
    if (!(w >= 0.0)) throw DomainError("boundary: negative frequency");
    if (kind_ == Kind::Drude) return kappa_ * cutoff_ * w / cplx(w, cutoff_);
    if (w == 0.0) return at_zero();
    return table_cauchy(w, true);
}

double SpectralDensity::at_zero() const {
    if (kind_ == Kind::Drude) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double x0 = grid_[i], x1 = grid_[i + 1];
        const double b = (values_[i + 1] - values_[i]) / (x1 - x0);
        const double a = values_[i] - b * x0;
        if (a != 0.0) s += a * std::log(x1 / x0);
        s += b * (x1 - x0);
    }
    return -s;
}

double SpectralDensity::inverse_moment() const {
    if (kind_ == Kind::Drude) return kappa_ * cutoff_;
    return -at_zero();
}

bool SpectralDensity::vanishes() const {
    if (kind_ == Kind::Drude) return kappa_ == 0.0;
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double SpectralDensity::support_end() const {
    return kind_ == Kind::Drude ? std::numeric_limits<double>::infinity() : grid_.back();
}

double SpectralDensity::scale() const { return kind_ == Kind::Drude ? cutoff_ : grid_.back(); }

std::vector<double> SpectralDensity::breakpoints() const {
    return kind_ == Kind::Drude ? std::vector<double>{} : grid_;
}

Susceptibility::Susceptibility(double omega0, std::vector<SpectralDensity> baths, SusceptibilityOptions opts)
    : omega0_(omega0), baths_(std::move(baths)), opts_(opts) {
    if (!(omega0_ > 0.0) || !std::isfinite(omega0_)) throw DomainError("susceptibility: Omega must be positive");
    bool drude = false;
    double top = omega0_;
    double table_end = 0.0;
    for (const auto& b : baths_) {
        if (b.kind() == SpectralDensity::Kind::Drude) {
            drude = true;
            top = std::max(top, b.cutoff());
        } else {
            table_end = std::max(table_end, b.support_end());
        }
        counter_ += b.at_zero();
    }
    if (opts_.omega_max > 0.0) {
        omega_max_ = opts_.omega_max;
    } else if (drude) {
        omega_max_ = 50.0 * std::max(top, table_end);
    } else {
        omega_max_ = table_end > 0.0 ? table_end : 50.0 * omega0_;
    }
    tail_octaves_ = opts_.tail_octaves >= 0 ? opts_.tail_octaves : (drude ? 12 : 0);

    report_ = scan();
    if (!report_.passed) return;

    quad::GridSpec spec;
    spec.omega_max = omega_max_;
    spec.order = opts_.order;
    spec.rel_tol = opts_.rel_tol;
    spec.max_depth = opts_.max_depth;
    spec.tail_octaves = tail_octaves_;
    spec.breakpoints = breakpoints();
    grid_ = quad::build_adaptive_grid(
        spec, {[this](double w) { return boundary(w).real(); }, [this](double w) { return boundary(w).imag(); }},
        &diag_);
    values_.resize(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) values_[i] = boundary(grid_.nodes()[i]);
}

double Susceptibility::gamma_sum(double w) const {
    double s = 0.0;
    for (const auto& b : baths_) s += b(w);
    return s;
}

cplx Susceptibility::denominator(cplx z) const {
    cplx d = omega0_ * omega0_ - counter_ - z * z;
    for (const auto& b : baths_) d += b.continuation(z);
    return d;
}

cplx Susceptibility::denominator_boundary(double w) const {
    cplx d = omega0_ * omega0_ - counter_ - w * w;
    for (const auto& b : baths_) d += b.boundary(w);
    return d;
}

cplx Susceptibility::operator()(cplx z) const { return 1.0 / denominator(z); }

cplx Susceptibility::boundary(double w) const {
    const cplx d = denominator_boundary(w);
    if (std::abs(d) < opts_.pole_tol) throw PoleError("F(w+i0+) has a pole near w=" + std::to_string(w), w);
    return 1.0 / d;
}

std::vector<double> Susceptibility::breakpoints() const {
    std::vector<double> out;
    for (const auto& b : baths_) {
        const auto bp = b.breakpoints();
        out.insert(out.end(), bp.begin(), bp.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PoleReport Susceptibility::scan() const {
    PoleReport r;
    double moment = 0.0;
    for (const auto& b : baths_) moment += b.inverse_moment();
    r.scan_max = std::max(omega_max_, 2.0 * std::sqrt(omega0_ * omega0_ + moment));
    const std::size_t n = std::max<std::size_t>(opts_.scan_points, 2);
    r.points = n;
    r.min_abs_denominator = std::numeric_limits<double>::infinity();
    std::vector<double> ws(n);
    std::vector<cplx> ds(n);
    for (std::size_t i = 0; i < n; ++i) {
        ws[i] = r.scan_max * static_cast<double>(i) / static_cast<double>(n - 1);
        ds[i] = denominator_boundary(ws[i]);
        r.min_abs_denominator = std::min(r.min_abs_denominator, std::abs(ds[i]));
        if (std::abs(ds[i]) < opts_.pole_tol) r.candidates.push_back(ws[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a0 = ds[i].real(), a1 = ds[i + 1].real();
        if (!((a0 < 0.0 && a1 > 0.0) || (a0 > 0.0 && a1 < 0.0))) continue;
        double lo = ws[i], hi = ws[i + 1], flo = a0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = denominator_boundary(mid).real();
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        const double mag = std::abs(denominator_boundary(root));
        r.min_abs_denominator = std::min(r.min_abs_denominator, mag);
        if (mag < opts_.pole_tol) r.candidates.push_back(root);
    }
    std::sort(r.candidates.begin(), r.candidates.end());
    r.candidates.erase(std::unique(r.candidates.begin(), r.candidates.end(),
                                   [&](double a, double b) { return std::abs(a - b) <= 2.0 * r.scan_max / static_cast<double>(n); }),
                       r.candidates.end());
    r.passed = r.candidates.empty();
    return r;
}

const quad::PanelGrid& Susceptibility::grid() const {
    if (!report_.passed) throw PoleError("susceptibility has a pole; no quadrature grid", report_.candidates.front());
    return grid_;
}

const std::vector<cplx>& Susceptibility::grid_values() const {
    if (!report_.passed) throw PoleError("susceptibility has a pole; no quadrature grid", report_.candidates.front());
    return values_;
}

ClassicalResponse::ClassicalResponse(std::shared_ptr<const Susceptibility> chi, std::vector<double> times, double horizon)
    : chi_(std::move(chi)), times_(std::move(times)) {
    const auto& g = chi_->grid();
    const auto& f = chi_->grid_values();
    std::vector<double> a(g.size()), b(g.size()), c(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = g.nodes()[i];
        a[i] = f[i].imag();
        b[i] = w * a[i];
        c[i] = w * b[i];
    }
    c_imf_ = g.expand(a);
    c_wimf_ = g.expand(b);
    c_wwimf_ = g.expand(c);
    slope0_ = 2.0 / pi * g.integrate(b);

    u_.resize(times_.size());
    du_.resize(times_.size());
    ddu_.resize(times_.size());
    parallel_for(times_.size(), [&](std::size_t i) { evaluate(times_[i], &u_[i], &du_[i], &ddu_[i]); });

    horizon_ = std::max(horizon, 0.0);
    for (double t : times_) horizon_ = std::max(horizon_, t);
    const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon_ / step_ - 1e-12)));
    std::vector<double> edges(panels + 1);
    for (std::size_t q = 0; q <= panels; ++q) edges[q] = step_ * static_cast<double>(q);
    const quad::PanelGrid tg(edges, 20);
    std::vector<double> us(tg.size()), dus(tg.size());
    parallel_for(tg.size(), [&](std::size_t i) {
        double dd;
        evaluate(tg.nodes()[i], &us[i], &dus[i], &dd);
    });
    cu_ = tg.expand(us);
    cdu_ = tg.expand(dus);
}

void ClassicalResponse::evaluate(double t, double* u, double* du, double* ddu) const {
    if (t < 0.0) {
        *u = *du = *ddu = 0.0;
        return;
    }
    const auto fac = chi_->grid().fourier_factors(t);
    *u = 2.0 / pi * quad::PanelGrid::apply(fac, c_imf_).imag();
    *du = 2.0 / pi * quad::PanelGrid::apply(fac, c_wimf_).real();
    *ddu = -2.0 / pi * quad::PanelGrid::apply(fac, c_wwimf_).imag();
}

double ClassicalResponse::u(double t) const {
    double a, b, c;
    evaluate(t, &a, &b, &c);
    return a;
}

double ClassicalResponse::du(double t) const {
    double a, b, c;
    evaluate(t, &a, &b, &c);
    return b;
}

double ClassicalResponse::ddu(double t) const {
    double a, b, c;
    evaluate(t, &a, &b, &c);
    return c;
}

cplx ClassicalResponse::full_ft(double w) const {
    if (w < 0.0) return std::conj(full_ft(-w));
    return std::conj(chi_->boundary(w));
}

std::vector<ClassicalResponse::Partial> ClassicalResponse::partial(const std::vector<double>& times,
                                                                   const std::vector<double>& omegas) const {
    constexpr int n = 20;
    const std::size_t panels = cu_.size() / n;
    for (double t : times)
        if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-12))
            throw DomainError("partial transform: t outside [0, horizon]");

    std::vector<std::size_t> order(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

    // Per time: index of the panel holding t and the Legendre coefficients of
    // u, du restricted to [q h, t].
    const auto rule = quad::gauss_legendre(n);
    std::vector<std::size_t> panel_of(times.size());
    std::vector<double> sub_u(times.size() * n), sub_du(times.size() * n);
    {
        std::vector<double> p(n), fu(n), fdu(n);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            std::size_t q = static_cast<std::size_t>(std::floor(t / step_));
            if (q >= panels) q = panels - 1;
            panel_of[i] = q;
            const double a = step_ * static_cast<double>(q);
            const double hs = 0.5 * (t - a);
            for (int j = 0; j < n; ++j) {
                const double tau = a + hs * (1.0 + rule.x[j]);
                const double y = (tau - (a + 0.5 * step_)) / (0.5 * step_);
                quad::legendre_values(n, y, p.data());
                double su = 0.0, sdu = 0.0;
                for (int k = 0; k < n; ++k) {
                    su += cu_[q * n + k] * p[k];
                    sdu += cdu_[q * n + k] * p[k];
                }
                fu[j] = su;
                fdu[j] = sdu;
            }
            for (int k = 0; k < n; ++k) {
                double su = 0.0, sdu = 0.0;
                for (int j = 0; j < n; ++j) {
                    quad::legendre_values(n, rule.x[j], p.data());
                    const double wk = (2.0 * k + 1.0) / 2.0 * rule.w[j] * p[k];
                    su += wk * fu[j];
                    sdu += wk * fdu[j];
                }
                sub_u[i * n + k] = su;
                sub_du[i * n + k] = sdu;
            }
        }
    }

    std::vector<Partial> out(times.size());
    for (auto& o : out) {
        o.u.resize(omegas.size());
        o.v.resize(omegas.size());
    }
    static const cplx mipow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}}; // (-i)^k
    parallel_for(omegas.size(), [&](std::size_t j) {
        const double w = omegas[j];
        double jb[n];
        quad::spherical_bessel(n, 0.5 * w * step_, jb);
        cplx kern[n];
        for (int k = 0; k < n; ++k) kern[k] = step_ * jb[k] * mipow[k % 4]; // (h/2) 2 (-i)^k j_k
        cplx acc_u = 0.0, acc_du = 0.0;
        std::size_t done = 0; // panels accumulated so far
        for (std::size_t idx : order) {
            const std::size_t q = panel_of[idx];
            for (; done < q; ++done) {
                cplx su = 0.0, sdu = 0.0;
                for (int k = 0; k < n; ++k) {
                    su += kern[k] * cu_[done * n + k];
                    sdu += kern[k] * cdu_[done * n + k];
                }
                const cplx ph = std::polar(1.0, -w * step_ * (static_cast<double>(done) + 0.5));
                acc_u += ph * su;
                acc_du += ph * sdu;
            }
            const double t = times[idx];
            const double a = step_ * static_cast<double>(q);
            const double hs = 0.5 * (t - a);
            cplx tu = acc_u, tdu = acc_du;
            if (hs > 0.0) {
                double js[n];
                quad::spherical_bessel(n, w * hs, js);
                cplx su = 0.0, sdu = 0.0;
                for (int k = 0; k < n; ++k) {
                    const cplx kk = 2.0 * hs * js[k] * mipow[k % 4];
                    su += kk * sub_u[idx * n + k];
                    sdu += kk * sub_du[idx * n + k];
                }
                const cplx ph = std::polar(1.0, -w * (a + hs));
                tu += ph * su;
                tdu += ph * sdu;
            }
            const cplx back = std::polar(1.0, w * t);
            out[idx].u[j] = back * tu;
            out[idx].v[j] = back * tdu;
        }
    });
    return out;
}

std::pair<cplx, cplx> ClassicalResponse::partial(double t, double w) const {
    const auto r = partial(std::vector<double>{t}, std::vector<double>{w});
    return {r[0].u[0], r[0].v[0]};
}

double gamma_eval(const SpectralDensity& spec, double w) { return spec(w); }

cplx gamma_continuation(const SpectralDensity& spec, cplx z) { return spec.continuation(z); }

cplx susceptibility_eval(const Susceptibility& chi, double w) { return chi.boundary(w); }

ClassicalResponse classical_u(std::shared_ptr<const Susceptibility> chi, const std::vector<double>& times) {
    return ClassicalResponse(std::move(chi), times);
}

std::pair<cplx, cplx> partial_ft(const ClassicalResponse& resp, double t, double w) { return resp.partial(t, w); }

cplx full_ft(const ClassicalResponse& resp, double w) { return resp.full_ft(w); }

PoleReport pole_scan(const Susceptibility& chi) { return chi.pole_report(); }

} // namespace oscbath
