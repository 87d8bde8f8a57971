#include "oscbath/scenario.hpp"

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oscbath {

namespace {

std::vector<SpectralDensity> spectra_of(const std::vector<Bath>& baths) {
    std::vector<SpectralDensity> out;
    out.reserve(baths.size());
    for (const auto& b : baths) out.push_back(b.spectrum);
    return out;
}

} // namespace

Scenario::Scenario(double omega0, std::vector<Bath> baths, ScenarioOptions opts)
    : omega0_(omega0), baths_(std::move(baths)), opts_(opts) {
    auto chi = std::make_shared<Susceptibility>(omega0_, spectra_of(baths_), opts_.chi);
    chi_ = chi;
    if (!chi_->pole_report().passed) {
        const auto& c = chi_->pole_report().candidates;
        std::ostringstream os;
        os << "pole scan failed";
        if (!c.empty()) os << ": F(z) has a pole near w=" << c.front();
        throw PoleError(os.str(), c.empty() ? 0.0 : c.front());
    }

    quad::GridSpec spec;
    spec.omega_max = chi_->omega_max();
    spec.order = opts_.chi.order;
    spec.rel_tol = opts_.rel_tol;
    spec.max_depth = opts_.max_depth;
    spec.tail_octaves = chi_->tail_octaves();
    spec.breakpoints = chi_->breakpoints();
    std::vector<std::function<double(double)>> features{
        [this](double w) { return chi_->boundary(w).real(); },
        [this](double w) { return chi_->boundary(w).imag(); },
    };
    for (const auto& b : baths_) {
        const auto* s = &b.spectrum;
        const auto* p = &b.preparation;
        for (double k : p->breakpoints()) spec.breakpoints.push_back(k);
        std::function<double(double)> fe = [s, p](double w) { return (*s)(w) * p->energy(w) / w; };
        std::function<double(double)> fd = [s, p](double w) { return (*s)(w) * (p->scaled_qq(w) - p->sigma_pp(w)) / w; };
        std::function<double(double)> fc = [s, p](double w) { return (*s)(w) * p->sigma_qp(w); };
        // kernels that vanish up to rounding would be refined forever
        double se = 0.0, sd = 0.0, sc = 0.0;
        const double top = spec.omega_max * std::ldexp(1.0, spec.tail_octaves);
        for (int k = 0; k <= 400; ++k) {
            const double w = 1e-4 * spec.omega_max * std::pow(top / (1e-4 * spec.omega_max), k / 400.0);
            se = std::max(se, std::abs(fe(w)));
            sd = std::max(sd, std::abs(fd(w)));
            sc = std::max(sc, std::abs(fc(w)));
        }
        features.push_back(fe);
        if (sd > 1e-9 * se) features.push_back(fd);
        if (sc > 1e-9 * se) features.push_back(fc);
        if (p->has_means()) {
            features.push_back([s, p](double w) { return std::sqrt(w * (*s)(w)) * p->mean_q(w); });
            features.push_back([s, p](double w) { return std::sqrt((*s)(w) / w) * p->mean_p(w); });
        }
    }
    grid_ = quad::build_adaptive_grid(spec, features, &diag_);

    const auto& w = grid_.nodes();
    const std::size_t n = w.size();
    for (const auto& b : baths_) b.preparation.validate(w);
    F_.resize(n);
    parallel_for(n, [&](std::size_t i) { F_[i] = chi_->boundary(w[i]); });
    gamma_.assign(baths_.size(), std::vector<double>(n));
    energy_ = excess_ = gamma_;
    weight_.assign(n, {0.0, 0.0, 0.0, 0.0});
    weight_a_.assign(baths_.size(), weight_);
    means_.assign(n, {0.0, 0.0});
    for (std::size_t a = 0; a < baths_.size(); ++a) {
        const auto& s = baths_[a].spectrum;
        const auto& p = baths_[a].preparation;
        has_means_ = has_means_ || p.has_means();
        for (std::size_t i = 0; i < n; ++i) {
            const double x = w[i], g = s(x);
            gamma_[a][i] = g;
            energy_[a][i] = p.energy(x);
            excess_[a][i] = p.excess_energy(x);
            const double qp = g * x * p.sigma_qp(x);
            const std::array<double, 4> wa{g * p.scaled_qq(x) / x, qp, qp, g * x * p.sigma_pp(x)};
            weight_a_[a][i] = wa;
            for (int k = 0; k < 4; ++k) weight_[i][static_cast<std::size_t>(k)] += wa[static_cast<std::size_t>(k)];
            if (p.has_means()) {
                const double c = std::sqrt(x * g);
                means_[i][0] += c * p.mean_q(x);
                means_[i][1] += c * p.mean_p(x);
            }
        }
    }
}

bool Scenario::has_sigma2() const noexcept {
    return std::any_of(baths_.begin(), baths_.end(), [](const Bath& b) { return b.preparation.has_sigma2(); });
}

std::shared_ptr<const ClassicalResponse> Scenario::response(double horizon) const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!response_ || response_->horizon() < horizon) {
        // round up so that nearby requests share the table
        const double h = 50.0 * std::ceil(std::max(horizon, 1.0) / 50.0);
        response_ = std::make_shared<ClassicalResponse>(chi_, std::vector<double>{}, h);
    }
    return response_;
}

std::vector<ModeMatrices> Scenario::mode_matrices(const std::vector<double>& times) const {
    double top = 0.0;
    for (double t : times) {
        if (!(t >= 0.0)) throw DomainError("mode matrices: negative time");
        top = std::max(top, t);
    }
    const auto resp = response(top);
    const auto& w = grid_.nodes();
    const auto partial = resp->partial(times, w);
    std::vector<ModeMatrices> out(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        auto& m = out[k];
        m.t = t;
        m.p.resize(w.size());
        m.p0.resize(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double x = w[i];
            const cplx A = std::conj(F_[i]);
            const cplx e = std::polar(1.0, x * t);
            const cplx B = partial[k].u[i] - e * A;
            const cplx Bv = partial[k].v[i] - e * (cplx(0.0, x) * A);
            m.p[i] = {0.5 * A, A / cplx(0.0, 2.0 * x), cplx(0.0, 0.5 * x) * A, 0.5 * A};
            m.p0[i] = {B.real(), B.imag() / x, Bv.real(), Bv.imag() / x};
        }
    }
    return out;
}

ModeMatrices Scenario::mode_matrices(double t) const { return mode_matrices(std::vector<double>{t}).front(); }

Mat2 Scenario::contract(const ModeMatrices& a, const ModeMatrices& b,
                        const std::vector<std::array<double, 4>>& weight) const {
    const std::size_t n = grid_.size();
    const auto f_sum = grid_.fourier_factors(a.t + b.t);
    const auto f_diff = grid_.fourier_factors(a.t - b.t);
    const auto f_a = grid_.fourier_factors(a.t);
    const auto f_b = grid_.fourier_factors(b.t);
    Mat2 out;
    std::vector<cplx> cs(n), cd(n), ca(n), cb(n);
    std::vector<double> c0(n);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (std::size_t q = 0; q < n; ++q) {
                const auto& W = weight[q];
                cplx s = 0.0, d = 0.0, x = 0.0, y = 0.0;
                double z = 0.0;
                for (int k = 0; k < 2; ++k) {
                    for (int l = 0; l < 2; ++l) {
                        const double wkl = W[static_cast<std::size_t>(2 * k + l)];
                        if (wkl == 0.0) continue;
                        const cplx p = a.p[q][static_cast<std::size_t>(2 * i + k)];
                        const cplx r = b.p[q][static_cast<std::size_t>(2 * j + l)];
                        const double p0 = a.p0[q][static_cast<std::size_t>(2 * i + k)];
                        const double r0 = b.p0[q][static_cast<std::size_t>(2 * j + l)];
                        s += wkl * p * r;
                        d += wkl * p * std::conj(r);
                        x += wkl * r0 * p;
                        y += wkl * p0 * r;
                        z += wkl * p0 * r0;
                    }
                }
                cs[q] = s;
                cd[q] = d;
                ca[q] = x;
                cb[q] = y;
                c0[q] = z;
            }
            const double v = 2.0 * (quad::PanelGrid::apply(f_sum, grid_.expand(cs)).real() +
                                    quad::PanelGrid::apply(f_diff, grid_.expand(cd)).real() +
                                    quad::PanelGrid::apply(f_a, grid_.expand(ca)).real() +
                                    quad::PanelGrid::apply(f_b, grid_.expand(cb)).real()) +
                             grid_.integrate(c0);
            out(i, j) = v;
        }
    }
    return out;
}

Vec2 Scenario::apply(const ModeMatrices& a, const std::vector<std::array<double, 2>>& x) const {
    const std::size_t n = grid_.size();
    const auto f = grid_.fourier_factors(a.t);
    Vec2 out;
    std::vector<cplx> c(n);
    std::vector<double> c0(n);
    for (int i = 0; i < 2; ++i) {
        for (std::size_t q = 0; q < n; ++q) {
            c[q] = a.p[q][static_cast<std::size_t>(2 * i)] * x[q][0] + a.p[q][static_cast<std::size_t>(2 * i + 1)] * x[q][1];
            c0[q] = a.p0[q][static_cast<std::size_t>(2 * i)] * x[q][0] + a.p0[q][static_cast<std::size_t>(2 * i + 1)] * x[q][1];
        }
        out(i) = 2.0 * quad::PanelGrid::apply(f, grid_.expand(c)).real() + grid_.integrate(c0);
    }
    return out;
}

std::size_t Scenario::sigma2_nodes(std::size_t a, double t) const {
    const auto& k = baths_.at(a).preparation.sigma2();
    if (!k) return 0;
    const double width = k->upper - k->lower;
    const auto panels = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(width * (t + 1.0) / 8.0)));
    return 20 * panels;
}

Mat2 Scenario::sigma2_contract(double t1, double t2) const {
    Mat2 total = Mat2::Zero();
    const double top = std::max(t1, t2);
    for (std::size_t a = 0; a < baths_.size(); ++a) {
        const auto& k = baths_[a].preparation.sigma2();
        if (!k) continue;
        const std::size_t n = sigma2_nodes(a, top);
        if (n * n > opts_.sigma2_budget) {
            std::ostringstream os;
            os << "sigma2 double quadrature needs " << n * n << " evaluations, budget is " << opts_.sigma2_budget;
            throw BudgetExceeded(os.str());
        }
        std::vector<double> edges(n / 20 + 1);
        for (std::size_t q = 0; q < edges.size(); ++q)
            edges[q] = k->lower + (k->upper - k->lower) * static_cast<double>(q) / static_cast<double>(edges.size() - 1);
        const quad::PanelGrid box(edges, 20);
        const auto& w = box.nodes();
        const auto& s = baths_[a].spectrum;
        const auto resp = response(top);
        const auto part = resp->partial(std::vector<double>{t1, t2}, w);
        // M(t, w) scaled by sqrt(w gamma) and the quadrature weight
        auto build = [&](std::size_t which) {
            std::vector<Mat2> m(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double x = w[i];
                const double c = std::sqrt(x * s(x)) * box.weights()[i];
                const cplx u = part[which].u[i], v = part[which].v[i];
                m[i] << u.real(), u.imag() / x, v.real(), v.imag() / x;
                m[i] *= c;
            }
            return m;
        };
        const auto m1 = build(0), m2 = build(1);
        std::vector<Mat2> partial_sums(w.size(), Mat2::Zero());
        parallel_for(w.size(), [&](std::size_t i) {
            Mat2 acc = Mat2::Zero();
            for (std::size_t j = 0; j < w.size(); ++j) {
                const Block2 b = k->value(w[i], w[j]);
                Mat2 sig;
                sig << b[0], b[1], b[2], b[3];
                acc += m1[i] * sig * m2[j].transpose();
            }
            partial_sums[i] = acc;
        });
        for (const auto& p : partial_sums) total += p;
    }
    return total;
}

} // namespace oscbath
