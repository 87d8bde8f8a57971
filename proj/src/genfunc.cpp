#include "oscbath/genfunc.hpp"

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace oscbath {

MomentState MomentState::make(double q, double p, double sqq, double sqp, double spp, double t) {
    MomentState s;
    s.X << q, p;
    s.Sigma << sqq, sqp, sqp, spp;
    s.t = t;
    s.validate();
    return s;
}

MomentState MomentState::ground(double omega0) {
    return make(0.0, 0.0, 0.5 / omega0, 0.0, 0.5 * omega0);
}

void MomentState::validate() const {
    const double det = Sigma.determinant();
    if (!X.allFinite() || !Sigma.allFinite()) throw InvalidPreparation("moment state: non-finite entries", 0.0);
    if (std::abs(Sigma(0, 1) - Sigma(1, 0)) > 1e-12 * (std::abs(Sigma(0, 1)) + 1.0))
        throw InvalidPreparation("moment state: covariance must be symmetric", 0.0);
    if (Sigma(0, 0) < 0.0 || Sigma(1, 1) < 0.0 || det < 0.25 * (1.0 - 1e-10)) {
        std::ostringstream os;
        os << "moment state violates the Heisenberg bound: det Sigma = " << det << " < 1/4";
        throw InvalidPreparation(os.str(), 0.0);
    }
}

std::vector<Propagator> propagators(const Scenario& sc, const std::vector<double>& times) {
    const auto resp = sc.response([&] {
        double m = 0.0;
        for (double t : times) m = std::max(m, t);
        return m;
    }());
    const auto modes = sc.mode_matrices(times);
    std::vector<Propagator> out(times.size());
    parallel_for(times.size(), [&](std::size_t k) {
        auto& p = out[k];
        const double t = times[k];
        p.t = t;
        const double u = resp->u(t), du = resp->du(t), ddu = resp->ddu(t);
        p.U << du, u, ddu, du;
        if (t == 0.0) return; // I = C = 0
        if (sc.has_means()) p.I = -sc.apply(modes[k], sc.mean_weight());
        p.C = sc.contract(modes[k], modes[k], sc.covariance_weight());
        if (sc.has_sigma2()) p.C += sc.sigma2_contract(t, t);
        p.C = 0.5 * (p.C + p.C.transpose()).eval();
    });
    return out;
}

Propagator propagator(const Scenario& sc, double t) { return propagators(sc, {t}).front(); }

MomentState propagate(const Propagator& prop, const MomentState& init) {
    MomentState s;
    s.t = init.t + prop.t;
    s.X = prop.U * init.X + prop.I;
    s.Sigma = prop.U * init.Sigma * prop.U.transpose() + prop.C;
    s.Sigma = 0.5 * (s.Sigma + s.Sigma.transpose()).eval();
    return s;
}

MomentState propagate(const Scenario& sc, const MomentState& init, double t) {
    return propagate(propagator(sc, t), init);
}

std::vector<MomentState> propagate(const Scenario& sc, const MomentState& init, const std::vector<double>& times) {
    const auto props = propagators(sc, times);
    std::vector<MomentState> out;
    out.reserve(props.size());
    for (const auto& p : props) out.push_back(propagate(p, init));
    return out;
}

MomentState asymptotic_state(const Scenario& sc) {
    const auto& w = sc.nodes();
    std::vector<double> qq(w.size(), 0.0), pp(w.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double f2 = std::norm(sc.F()[i]);
        for (std::size_t a = 0; a < sc.size(); ++a) {
            const double g = sc.gamma(a)[i] * f2 * sc.energy(a)[i];
            qq[i] += g / w[i];
            pp[i] += g * w[i];
        }
    }
    MomentState s;
    s.Sigma << sc.grid().integrate(qq), 0.0, 0.0, sc.grid().integrate(pp);
    s.t = std::numeric_limits<double>::infinity();
    return s;
}

AsymptoticEstimate asymptotic_by_doubling(const Scenario& sc, const MomentState& init, double tol, double t0,
                                          double t_max) {
    AsymptoticEstimate est;
    std::vector<double> times;
    for (double t = t0; t <= t_max * (1.0 + 1e-12); t *= 2.0) times.push_back(t);
    if (times.size() < 2) throw DomainError("asymptotic_by_doubling: need t_max >= 2 t0");
    const auto states = propagate(sc, init, times);
    for (std::size_t k = 1; k < states.size(); ++k) {
        est.state = states[k];
        est.change = (states[k].Sigma - states[k - 1].Sigma).cwiseAbs().maxCoeff();
        if (est.change < tol) {
            est.converged = true;
            break;
        }
    }
    return est;
}

std::complex<double> zq(const MomentState& state, std::complex<double> xi) {
    return std::exp(-0.5 * xi * xi * state.Sigma(0, 0) + std::complex<double>(0.0, 1.0) * xi * state.X(0));
}

std::complex<double> zq(const Scenario& sc, const MomentState& init, std::complex<double> xi, double t) {
    return zq(propagate(sc, init, t), xi);
}

double gc_shift(const MomentState& state) {
    if (!(state.Sigma(0, 0) > 0.0)) throw DomainError("gc_shift: position variance must be positive");
    return 2.0 * state.X(0) / state.Sigma(0, 0);
}

double gc_shift(const Scenario& sc, const MomentState& init, double t) { return gc_shift(propagate(sc, init, t)); }

} // namespace oscbath
