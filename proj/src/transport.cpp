#include "oscbath/transport.hpp"

#include "oscbath/errors.hpp"
#include "oscbath/preparations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace oscbath {

namespace {

constexpr double pi = std::numbers::pi;

// x^2 / sinh^2 x without overflow
double x2_over_sinh2(double x) {
    if (x < 1e-4) return 1.0 - x * x / 3.0;
    const double e = std::exp(-2.0 * x);
    return 4.0 * x * x * e / ((1.0 - e) * (1.0 - e));
}

} // namespace

TransportModel::TransportModel(std::shared_ptr<const Scenario> sc, std::size_t left) : sc_(std::move(sc)) {
    if (!sc_) throw DomainError("transport: null scenario");
    if (sc_->size() != 2) throw DomainError("transport requires exactly two baths");
    if (left > 1) throw DomainError("transport: left bath index must be 0 or 1");
    l_ = left;
    r_ = 1 - left;
    const auto& w = sc_->nodes();
    trans_.resize(w.size());
    n_l_.resize(w.size());
    n_r_.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        trans_[i] = pi * pi * sc_->gamma(l_)[i] * sc_->gamma(r_)[i] * std::norm(sc_->F()[i]);
        n_l_[i] = sc_->excess(l_)[i] / w[i];
        n_r_[i] = sc_->excess(r_)[i] / w[i];
    }
    cutoff_ = sc_->susceptibility().omega_max();
}

double steady_current(const TransportModel& m) {
    const auto& sc = m.scenario();
    const auto& w = sc.nodes();
    std::vector<double> f(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double de = sc.excess(m.left())[i] - sc.excess(m.right())[i];
        f[i] = 0.5 * pi * sc.gamma(m.left())[i] * sc.gamma(m.right())[i] * std::norm(sc.F()[i]) * de;
    }
    return sc.grid().integrate(f);
}

double first_cumulant_rate(const TransportModel& m) {
    const auto& sc = m.scenario();
    const auto& w = sc.nodes();
    std::vector<double> f(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double gl = sc.gamma(m.left())[i];
        const double uI = -sc.F()[i].imag();
        double s = 0.0;
        for (std::size_t a = 0; a < sc.size(); ++a) s += sc.gamma(a)[i] * sc.energy(a)[i];
        f[i] = -gl * (uI * sc.energy(m.left())[i] + 0.5 * pi * std::norm(sc.F()[i]) * s);
    }
    return sc.grid().integrate(f);
}

double linear_response_slope(const TransportModel& m, double T_r) {
    if (!(T_r > 0.0)) throw DomainError("linear response: temperature must be positive");
    const auto& sc = m.scenario();
    for (const auto& b : sc.baths())
        if (!b.preparation.thermal_second_moments())
            throw Unsupported("linear response requires thermal bath preparations");
    const auto& w = sc.nodes();
    std::vector<double> f(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        f[i] = 0.5 * pi * sc.gamma(m.left())[i] * sc.gamma(m.right())[i] * std::norm(sc.F()[i]) *
               x2_over_sinh2(w[i] / (2.0 * T_r));
    return sc.grid().integrate(f);
}

double linear_response_current(const TransportModel& m, double T_r, double dT) {
    return dT * linear_response_slope(m, T_r);
}

double second_cumulant_rate(const TransportModel& m) {
    const auto& sc = m.scenario();
    const auto& w = sc.nodes();
    std::vector<double> f(w.size()), scale(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double gg = sc.gamma(m.left())[i] * sc.gamma(m.right())[i];
        const double u2 = std::norm(sc.F()[i]);
        const double el = sc.energy(m.left())[i], er = sc.energy(m.right())[i];
        const double de = sc.excess(m.left())[i] - sc.excess(m.right())[i];
        // 2 E_l E_r - w^2/2 = 2 X_l X_r + w (X_l + X_r), X = E - w/2
        const double xl = sc.excess(m.left())[i], xr = sc.excess(m.right())[i];
        const double sym = 2.0 * xl * xr + w[i] * (xl + xr);
        f[i] = 0.5 * pi * pi * pi * gg * gg * u2 * u2 * de * de + 0.5 * pi * gg * u2 * sym;
        scale[i] = 0.5 * pi * gg * u2 * 2.0 * el * er;
    }
    const double v = sc.grid().integrate(f);
    const double s = sc.grid().integrate(scale);
    if (v < -1e-12 * s) {
        std::ostringstream os;
        os << "second cumulant rate is negative: " << v;
        throw ToleranceError(os.str());
    }
    return v;
}

double second_cumulant_rate_thermal(const TransportModel& m) {
    const auto& sc = m.scenario();
    const auto& pl = sc.baths()[m.left()].preparation;
    const auto& pr = sc.baths()[m.right()].preparation;
    if (!pl.thermal_second_moments() || !pr.thermal_second_moments())
        throw Unsupported("thermal second cumulant requires thermal bath preparations");
    const double Tl = pl.temperature(), Tr = pr.temperature();
    const auto& w = sc.nodes();
    std::vector<double> f(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = w[i];
        const double fl = bose_occupation(x, Tl), fr = bose_occupation(x, Tr);
        const double tr = pi * pi * sc.susceptibility().baths()[m.left()](x) * sc.susceptibility().baths()[m.right()](x) *
                          std::norm(sc.F()[i]);
        f[i] = x * x / (2.0 * pi) * (tr * (fl * (1.0 + fr) + fr * (1.0 + fl)) + tr * tr * (fl - fr) * (fl - fr));
    }
    return sc.grid().integrate(f);
}

std::complex<double> cgf(const TransportModel& m, std::complex<double> xi) {
    using C = std::complex<double>;
    const auto& sc = m.scenario();
    const auto& g = sc.grid();
    const auto& w = g.nodes();
    const auto& tr = m.transmission();
    const auto& nl = m.occupation_left();
    const auto& nr = m.occupation_right();
    C total = 0.0;
    double phase = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = w[i];
        if (x > m.cgf_cutoff()) break;
        C z = 1.0;
        if (tr[i] > 0.0) {
            const double a = nl[i] * (1.0 + nr[i]), b = nr[i] * (1.0 + nl[i]);
            const double lt = std::log(tr[i]);
            C term = 0.0;
            if (a > 0.0) term += std::exp(C(lt + std::log(a) - xi.imag() * x, xi.real() * x)) - tr[i] * a;
            if (b > 0.0) term += std::exp(C(lt + std::log(b) + xi.imag() * x, -xi.real() * x)) - tr[i] * b;
            z -= term;
        }
        // unwrap against the previous node
        phase += std::remainder(std::arg(z) - phase, 2.0 * pi);
        if (std::abs(phase) >= pi || z == 0.0) {
            std::ostringstream os;
            os << "cgf: logarithm argument crosses the branch cut at w=" << x << " for xi=" << xi;
            throw BranchError(os.str(), x, xi.real(), xi.imag());
        }
        total += g.weights()[i] * C(std::log(std::abs(z)), phase);
    }
    return -total / (2.0 * pi);
}

AffinityReport affinity(const TransportModel& m, double rel_tol) {
    const auto& w = m.scenario().nodes();
    AffinityReport r;
    const double inf = std::numeric_limits<double>::infinity();
    r.beta_l_min = r.beta_r_min = inf;
    r.beta_l_max = r.beta_r_max = -inf;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = w[i];
        if (x > m.cgf_cutoff()) break;
        const double nl = m.occupation_left()[i], nr = m.occupation_right()[i];
        if (!(nl > 0.0) || !(nr > 0.0)) {
            ++r.invalid_points;
            continue;
        }
        const double bl = std::log1p(1.0 / nl) / x, br = std::log1p(1.0 / nr) / x;
        if (!std::isfinite(bl) || !std::isfinite(br)) {
            ++r.invalid_points;
            continue;
        }
        r.beta_l_min = std::min(r.beta_l_min, bl);
        r.beta_l_max = std::max(r.beta_l_max, bl);
        r.beta_r_min = std::min(r.beta_r_min, br);
        r.beta_r_max = std::max(r.beta_r_max, br);
        sum += br - bl;
        ++count;
    }
    if (count == 0) return r;
    r.A = sum / static_cast<double>(count);
    const bool cl = r.beta_l_max - r.beta_l_min <= rel_tol * std::abs(r.beta_l_max);
    const bool cr = r.beta_r_max - r.beta_r_min <= rel_tol * std::abs(r.beta_r_max);
    r.constant = cl && cr;
    if (r.constant) r.A = 0.5 * (r.beta_r_max + r.beta_r_min) - 0.5 * (r.beta_l_max + r.beta_l_min);
    return r;
}

double gc_residual(const TransportModel& m, const std::vector<double>& xis, double A) {
    double worst = 0.0;
    for (double x : xis) {
        const auto g1 = cgf(m, {x, 0.0});
        const auto g2 = cgf(m, {-x, A});
        worst = std::max(worst, std::abs(g1 - g2));
    }
    return worst;
}

} // namespace oscbath
