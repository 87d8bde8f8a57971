#include "oscbath/oracle.hpp"

#include "oscbath/errors.hpp"
#include "oscbath/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace oscbath {

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

DiscreteBath discretize(const SpectralDensity& spec, std::size_t n, double scale, const ModeLayout& layout) {
    if (n == 0) throw DomainError("discretize: need at least one mode");
    if (!(scale > 0.0)) throw DomainError("discretize: scale must be positive");
    if (!(layout.dense_extent > 0.0) || !(layout.dense_fraction > 0.0) || !(layout.dense_fraction <= 1.0) ||
        !(layout.top > 0.0))
        throw DomainError("discretize: invalid mode layout");
    DiscreteBath d;
    auto midpoint = [&d](double lo, double hi, std::size_t m) {
        const double h = (hi - lo) / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) {
            d.omega.push_back(lo + (static_cast<double>(i) + 0.5) * h);
            d.weight.push_back(h);
        }
    };
    if (spec.kind() == SpectralDensity::Kind::Drude) {
        // the missing tail above top shifts K(0) and the counter term alike
        const double dense = layout.dense_extent * scale, top = std::max(layout.top * spec.cutoff(), 2.0 * dense);
        const auto nd = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(layout.dense_fraction * static_cast<double>(n))), 1, n);
        const std::size_t nt = n - nd;
        midpoint(0.0, dense, nd);
        if (nt > 0) {
            const auto rule = quad::gauss_legendre(static_cast<int>(nt));
            const double half = 0.5 * std::log(top / dense);
            for (std::size_t i = 0; i < nt; ++i) {
                const double w = dense * std::exp(half * (rule.x[i] + 1.0));
                d.omega.push_back(w);
                d.weight.push_back(half * rule.w[i] * w);
            }
        }
    } else {
        midpoint(0.0, spec.support_end(), n);
    }
    for (std::size_t i = 0; i < n; ++i) d.lambda.push_back(std::sqrt(d.omega[i] * spec(d.omega[i]) * d.weight[i]));
    return d;
}

Oracle::Oracle(double omega0, std::vector<Bath> baths, const MomentState& init, OracleOptions opts)
    : omega0_(omega0) {
    if (!(omega0 > 0.0)) throw DomainError("oracle: Omega must be positive");
    init.validate();
    if (opts.modes_per_bath == 0) throw DomainError("oracle: modes_per_bath must be positive");
    if (opts.modes_per_bath * baths.size() > opts.max_modes) {
        std::ostringstream os;
        os << "oracle: " << opts.modes_per_bath * baths.size() << " modes exceed the limit of " << opts.max_modes;
        throw DomainError(os.str());
    }
    n_ = 1;
    recurrence_ = std::numeric_limits<double>::infinity();
    for (const auto& b : baths) {
        offsets_.push_back(n_);
        disc_.push_back(discretize(b.spectrum, opts.modes_per_bath, omega0, opts.layout));
        n_ += opts.modes_per_bath;
        const auto& w = disc_.back().omega;
        std::size_t k = 0;
        while (k + 2 < w.size() && w[k + 1] < omega0) ++k;
        if (k + 1 < w.size()) recurrence_ = std::min(recurrence_, 2.0 * pi / (w[k + 1] - w[k]));
    }

    // potential matrix including the counter term
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n_, n_);
    V(0, 0) = omega0 * omega0;
    for (std::size_t a = 0; a < disc_.size(); ++a) {
        const auto& d = disc_[a];
        for (std::size_t i = 0; i < d.omega.size(); ++i) {
            const std::size_t j = offsets_[a] + i;
            V(j, j) = d.omega[i] * d.omega[i];
            V(0, j) = V(j, 0) = -d.lambda[i];
            V(0, 0) += d.lambda[i] * d.lambda[i] / (d.omega[i] * d.omega[i]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(V);
    if (es.info() != Eigen::Success) throw std::runtime_error("oracle: eigen decomposition failed");
    if (!(es.eigenvalues().minCoeff() > 0.0)) throw DomainError("oracle: potential matrix is not positive definite");
    O_ = es.eigenvectors();
    W_ = es.eigenvalues().cwiseSqrt();

    // initial moments in the physical coordinates
    Eigen::VectorXd xq = Eigen::VectorXd::Zero(n_), xp = Eigen::VectorXd::Zero(n_);
    Eigen::MatrixXd qq = Eigen::MatrixXd::Zero(n_, n_), qp = qq, pp = qq;
    xq(0) = init.X(0);
    xp(0) = init.X(1);
    qq(0, 0) = init.Sigma(0, 0);
    qp(0, 0) = init.Sigma(0, 1);
    pp(0, 0) = init.Sigma(1, 1);
    for (std::size_t a = 0; a < disc_.size(); ++a) {
        const auto& d = disc_[a];
        const auto& prep = baths[a].preparation;
        for (std::size_t i = 0; i < d.omega.size(); ++i) {
            const std::size_t j = offsets_[a] + i;
            const double w = d.omega[i];
            const double sw = std::sqrt(d.weight[i]);
            xq(j) = prep.mean_q(w) * sw;
            xp(j) = prep.mean_p(w) * sw;
            qq(j, j) = prep.sigma_qq(w);
            qp(j, j) = prep.sigma_qp(w);
            pp(j, j) = prep.sigma_pp(w);
        }
        if (const auto& k = prep.sigma2()) {
            for (std::size_t i = 0; i < d.omega.size(); ++i) {
                for (std::size_t l = 0; l < d.omega.size(); ++l) {
                    const double w1 = d.omega[i], w2 = d.omega[l];
                    if (w1 < k->lower || w1 > k->upper || w2 < k->lower || w2 > k->upper) continue;
                    const Block2 b = k->value(w1, w2);
                    const double c = std::sqrt(d.weight[i] * d.weight[l]);
                    const std::size_t r = offsets_[a] + i, s = offsets_[a] + l;
                    qq(r, s) += c * b[0];
                    qp(r, s) += c * b[1];
                    pp(r, s) += c * b[3];
                }
            }
        }
    }
    x0_ = O_.transpose() * xq;
    p0_ = O_.transpose() * xp;
    s_yy_ = O_.transpose() * qq * O_;
    s_ypi_ = O_.transpose() * qp * O_;
    s_pipi_ = O_.transpose() * pp * O_;

    for (std::size_t a = 0; a < disc_.size(); ++a) {
        const auto& d = disc_[a];
        Eigen::VectorXd mq = Eigen::VectorXd::Zero(n_), mp = Eigen::VectorXd::Zero(n_);
        Eigen::VectorXd row = Eigen::VectorXd::Zero(n_);
        for (std::size_t i = 0; i < d.omega.size(); ++i) {
            const std::size_t j = offsets_[a] + i;
            mq(j) = d.omega[i] * d.omega[i];
            mp(j) = 1.0;
            row += d.lambda[i] * O_.row(j).transpose();
        }
        energy_q_.push_back(O_.transpose() * mq.asDiagonal() * O_);
        energy_p_.push_back(O_.transpose() * mp.asDiagonal() * O_);
        current_row_.push_back(row);
    }
}

Oracle::Evolved Oracle::evolve(double t) const {
    const Eigen::ArrayXd c = (W_.array() * t).cos();
    const Eigen::ArrayXd s = (W_.array() * t).sin();
    const Eigen::ArrayXd w = W_.array();
    Evolved e;
    // y(t) = c y0 + (s/W) pi0, pi(t) = -W s y0 + c pi0
    e.y = (c * x0_.array() + s / w * p0_.array()).matrix();
    e.pi = (-w * s * x0_.array() + c * p0_.array()).matrix();
    const Eigen::ArrayXXd syy = s_yy_.array(), syp = s_ypi_.array(), spp = s_pipi_.array();
    const Eigen::ArrayXXd spy = s_ypi_.transpose().array();
    const Eigen::ArrayXd a1 = c, b1 = s / w;      // y row coefficients
    const Eigen::ArrayXd a2 = -w * s, b2 = c;     // pi row coefficients
    auto block = [&](const Eigen::ArrayXd& ra, const Eigen::ArrayXd& rb, const Eigen::ArrayXd& ca,
                     const Eigen::ArrayXd& cb) {
        Eigen::MatrixXd m = ((ra.matrix() * ca.matrix().transpose()).array() * syy +
                             (ra.matrix() * cb.matrix().transpose()).array() * syp +
                             (rb.matrix() * ca.matrix().transpose()).array() * spy +
                             (rb.matrix() * cb.matrix().transpose()).array() * spp)
                                .matrix();
        return m;
    };
    e.yy = block(a1, b1, a1, b1);
    e.ypi = block(a1, b1, a2, b2);
    e.piy = e.ypi.transpose();
    e.pipi = block(a2, b2, a2, b2);
    return e;
}

double Oracle::symplectic_error(double t) const {
    // full propagator in physical coordinates
    const Eigen::ArrayXd c = (W_.array() * t).cos(), s = (W_.array() * t).sin();
    const Eigen::MatrixXd mqq = O_ * c.matrix().asDiagonal() * O_.transpose();
    const Eigen::MatrixXd mqp = O_ * (s / W_.array()).matrix().asDiagonal() * O_.transpose();
    const Eigen::MatrixXd mpq = O_ * (-W_.array() * s).matrix().asDiagonal() * O_.transpose();
    const Eigen::MatrixXd mpp = mqq;
    // M J M^T = J blockwise
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n_, n_);
    const double e1 = (mqq * mqp.transpose() - mqp * mqq.transpose()).cwiseAbs().maxCoeff();
    const double e2 = (mqq * mpp.transpose() - mqp * mpq.transpose() - id).cwiseAbs().maxCoeff();
    const double e3 = (mpq * mpp.transpose() - mpp * mpq.transpose()).cwiseAbs().maxCoeff();
    return std::max({e1, e2, e3});
}

double Oracle::u(double t) const {
    const Eigen::ArrayXd s = (W_.array() * t).sin() / W_.array();
    return (O_.row(0).array().square() * s.transpose()).sum();
}

MomentState Oracle::system_state(double t) const {
    const auto e = evolve(t);
    const Eigen::VectorXd o = O_.row(0).transpose();
    MomentState m;
    m.t = t;
    m.X << o.dot(e.y), o.dot(e.pi);
    m.Sigma << o.dot(e.yy * o), o.dot(e.ypi * o), o.dot(e.piy * o), o.dot(e.pipi * o);
    return m;
}

Eigen::MatrixXd Oracle::evolve_cross(double t1, double t2) const {
    const Eigen::ArrayXd w = W_.array();
    const Eigen::ArrayXd a1 = (w * t1).cos(), b1 = (w * t1).sin() / w;
    const Eigen::ArrayXd a2 = (w * t2).cos(), b2 = (w * t2).sin() / w;
    const Eigen::ArrayXXd spy = s_ypi_.transpose().array();
    return ((a1.matrix() * a2.matrix().transpose()).array() * s_yy_.array() +
            (a1.matrix() * b2.matrix().transpose()).array() * s_ypi_.array() +
            (b1.matrix() * a2.matrix().transpose()).array() * spy +
            (b1.matrix() * b2.matrix().transpose()).array() * s_pipi_.array())
        .matrix();
}

TwoTime Oracle::correlation(double t, double s) const {
    if (!(t >= 0.0) || !(t + s >= 0.0)) throw DomainError("oracle: need t >= 0 and t + s >= 0");
    const Eigen::VectorXd o = O_.row(0).transpose();
    const Eigen::ArrayXd w = W_.array();
    auto mean = [&](double x) {
        return o.dot(((w * x).cos() * x0_.array() + (w * x).sin() / w * p0_.array()).matrix());
    };
    TwoTime r;
    r.t = t;
    r.s = s;
    r.psi = o.dot(evolve_cross(t, t + s) * o) + mean(t) * mean(t + s);
    r.phi = (o.array().square() * (w * s).sin() / w).sum();
    return r;
}

double Oracle::bath_energy(std::size_t a, double t) const {
    const auto e = evolve(t);
    const auto& aq = energy_q_.at(a);
    const auto& ap = energy_p_.at(a);
    const double cov = (aq.array() * e.yy.array()).sum() + (ap.array() * e.pipi.array()).sum();
    const double mean = e.y.dot(aq * e.y) + e.pi.dot(ap * e.pi);
    return 0.5 * (cov + mean);
}

double Oracle::current(std::size_t a, double t) const {
    // d H_B/dt = sum lambda {p_nu, Q}/2
    const auto e = evolve(t);
    const Eigen::VectorXd o = O_.row(0).transpose();
    const auto& row = current_row_.at(a);
    return -(row.dot(e.piy * o) + row.dot(e.pi) * o.dot(e.y));
}

double Oracle::total_energy(double t) const {
    const auto e = evolve(t);
    const Eigen::ArrayXd w2 = W_.array().square();
    return 0.5 * ((w2 * (e.yy.diagonal().array() + e.y.array().square())).sum() +
                  (e.pipi.diagonal().array() + e.pi.array().square()).sum());
}

double Oracle::work_mean(std::size_t a, double t) const { return bath_energy(a, 0.0) - bath_energy(a, t); }

} // namespace oscbath
