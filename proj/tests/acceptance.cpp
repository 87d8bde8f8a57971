// acceptance: one pass/fail line per acceptance criterion on the reference
// scenario S0 (Omega = 1, two Drude baths kappa = 0.05, wc = 10).

#include "oscbath/correlations.hpp"
#include "oscbath/genfunc.hpp"
#include "oscbath/noise.hpp"
#include "oscbath/oracle.hpp"
#include "oscbath/transport.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

using namespace oscbath;

namespace {

std::shared_ptr<const Scenario> s0(BathPreparation l, BathPreparation r, double kappa_r = 0.05) {
    return std::make_shared<const Scenario>(1.0, std::vector<Bath>{{SpectralDensity::drude(0.05, 10.0), std::move(l)},
                                                                   {SpectralDensity::drude(kappa_r, 10.0), std::move(r)}});
}

std::shared_ptr<const Scenario> s0_thermal(double tl, double tr) {
    return s0(BathPreparation::thermal(tl), BathPreparation::thermal(tr));
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int failures = 0;

// One line per criterion; `detail` lists the measured values against their tolerances.
void verdict(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %2d  %s  %s: %s\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* name, double value, const char* op, double tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3e %s %.0e", name, value, op, tol);
    return buf;
}

std::string join(std::initializer_list<std::string> parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : ", ") + p;
    return s;
}

const std::vector<double> omegas = linspace(0.1, 5.0, 491);
const std::vector<double> xis = linspace(-2.0, 2.0, 41);

void equilibrium_fdt() {
    const double r = equilibrium_fdt_residual(*s0_thermal(1.0, 1.0), omegas, 1.0);
    verdict(1, r < 1e-8, "equilibrium FDT", fmt("max relative deviation", r, "<", 1e-8));
}

// min over T of max over w of |R(w) / ((1/2) coth(w/2T)) - 1| with R = Psi / (Phi/i)
double coth_distance(const Scenario& sc) {
    std::vector<double> ratio;
    for (double w : omegas) ratio.push_back(psi_spectrum(sc, w) / phi_spectrum(sc, w));
    auto dist = [&](double logT) {
        const double T = std::exp(logT);
        double m = 0.0;
        for (std::size_t i = 0; i < omegas.size(); ++i)
            m = std::max(m, std::abs(ratio[i] / (0.5 / std::tanh(omegas[i] / (2.0 * T))) - 1.0));
        return m;
    };
    double best = std::log(1e-3), fbest = dist(best);
    for (double x = std::log(1e-3); x <= std::log(1e3); x += 0.01)
        if (const double f = dist(x); f < fbest) fbest = f, best = x;
    const auto res = boost::math::tools::brent_find_minima(dist, best - 0.02, best + 0.02, 50);
    return std::min(fbest, res.second);
}

void generalized_fdt() {
    const auto sc = s0(BathPreparation::thermal(1.0), BathPreparation::squeezed_thermal(1.0, 0.5));
    const double r = fdt_check(*sc, omegas).residual;
    const double d = coth_distance(*sc);
    verdict(2, r < 1e-10 && d > 0.1, "generalized FDT",
            join({fmt("shared-factor residual", r, "<", 1e-10), fmt("distance to nearest coth curve", d, ">", 0.1)}));
}

void phi_independence() {
    const auto a = s0_thermal(2.0, 1.0);
    const auto b = s0(BathPreparation::squeezed_thermal(0.7, 0.8), effectively_thermal(3.0, 0.5));
    double m = 0.0;
    for (double w : omegas) m = std::max(m, rel(phi_spectrum(*b, w), phi_spectrum(*a, w)));
    verdict(3, m < 1e-12, "preparation independence of Phi", fmt("max relative difference", m, "<", 1e-12));
}

void zero_current() {
    const double uncoupled = std::abs(steady_current(TransportModel(s0(BathPreparation::thermal(2.0), BathPreparation::thermal(1.0), 0.0))));
    const double equal_thermal = std::abs(steady_current(TransportModel(s0_thermal(1.3, 1.3))));
    const double equal_squeezed = std::abs(steady_current(
        TransportModel(s0(BathPreparation::squeezed_thermal(1.0, 0.4), BathPreparation::squeezed_thermal(1.0, 0.4)))));
    const bool pass = uncoupled < 1e-10 && equal_thermal < 1e-10 && equal_squeezed < 1e-10;
    verdict(4, pass, "zero-current conditions",
            join({fmt("|I| gamma_r = 0", uncoupled, "<", 1e-10), fmt("|I| equal thermal", equal_thermal, "<", 1e-10),
                  fmt("|I| equal squeezed", equal_squeezed, "<", 1e-10)}));
}

void linear_response() {
    const double h = 1e-3;
    const double fd = (steady_current(TransportModel(s0_thermal(1.0 + h, 1.0))) -
                       steady_current(TransportModel(s0_thermal(1.0 - h, 1.0)))) / (2.0 * h);
    const double slope = linear_response_slope(TransportModel(s0_thermal(1.0, 1.0)), 1.0);
    const double r = rel(slope, fd);
    verdict(5, r < 1e-3, "linear response", fmt("relative difference to finite difference", r, "<", 1e-3));
}

void cumulants() {
    const TransportModel m(s0_thermal(2.0, 1.0));
    const double h = 2e-3;
    const cplx gp1 = cgf(m, h), gm1 = cgf(m, -h), gp2 = cgf(m, 2.0 * h), gm2 = cgf(m, -2.0 * h), g0 = cgf(m, 0.0);
    const double d1 = ((-gp2 + 8.0 * gp1 - 8.0 * gm1 + gm2) / (12.0 * h)).imag();
    const double d2 = -((-gp2 + 16.0 * gp1 - 30.0 * g0 + 16.0 * gm1 - gm2) / (12.0 * h * h)).real();
    const double e1 = rel(d1, steady_current(m)), e2 = rel(d2, second_cumulant_rate(m));
    verdict(6, e1 < 1e-6 && e2 < 1e-6, "cumulant consistency",
            join({fmt("first", e1, "<", 1e-6), fmt("second", e2, "<", 1e-6)}));
}

void gallavotti_cohen() {
    const TransportModel m(s0_thermal(2.0, 1.0));
    const double A = 1.0 / 1.0 - 1.0 / 2.0;
    const double r = gc_residual(m, xis, A);
    const TransportModel sq(s0(BathPreparation::squeezed_thermal(1.0, 0.5), BathPreparation::thermal(1.0)));
    const double rs = gc_residual(sq, xis, affinity(sq).A);
    verdict(7, r < 1e-8, "Gallavotti-Cohen symmetry",
            join({fmt("thermal residual", r, "<", 1e-8), fmt("squeezed residual (reported)", rs, ">", 1e-3)}));
}

void zq_symmetry() {
    const auto sc = s0_thermal(2.0, 1.0);
    const auto init = MomentState::make(0.8, -0.3, 0.7, 0.1, 0.6);
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> xi(-2.0, 2.0), tt(0.0, 50.0);
    double m = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double x = xi(rng), t = tt(rng);
        const auto state = propagate(*sc, init, t);
        const double A = gc_shift(state);
        m = std::max(m, std::abs(zq(state, cplx(-x, A)) - zq(state, x)));
    }
    verdict(8, m < 1e-12, "Z_Q symmetry", fmt("max |Z(-xi + iA) - Z(xi)| over 100 draws", m, "<", 1e-12));
}

void oracle() {
    const auto baths = std::vector<Bath>{{SpectralDensity::drude(0.05, 10.0), BathPreparation::thermal(2.0)},
                                         {SpectralDensity::drude(0.05, 10.0), BathPreparation::thermal(1.0)}};
    const auto sc = std::make_shared<const Scenario>(1.0, baths);
    const auto init = MomentState::make(0.7, -0.2, 0.6, 0.1, 0.5);
    OracleOptions transient, plain;
    transient.modes_per_bath = plain.modes_per_bath = 300;
    transient.layout = ModeLayout::transient();
    const Oracle ot(1.0, baths, init, transient);
    const Oracle od(1.0, baths, init, plain);

    // u and Sigma on t <= 50, below the recurrence time of the transient layout
    const auto resp = sc->response(50.0);
    double eu = 0.0, su = 0.0, es = 0.0, ss = 0.0;
    for (double t = 0.0; t <= 50.0 && t < ot.recurrence_time(); t += 0.5) {
        eu = std::max(eu, std::abs(ot.u(t) - resp->u(t)));
        su = std::max(su, std::abs(resp->u(t)));
        const auto a = propagate(*sc, init, t);
        es = std::max(es, (a.Sigma - ot.system_state(t).Sigma).cwiseAbs().maxCoeff());
        ss = std::max(ss, a.Sigma.cwiseAbs().maxCoeff());
    }
    // Psi(100, s) and the current plateau W(100)/100 with the default layout
    std::vector<std::pair<double, double>> points;
    for (double s = 0.0; s <= 20.0; s += 0.5)
        if (100.0 + s < od.recurrence_time()) points.emplace_back(100.0, s);
    const auto ref = finite_time_correlations(*sc, init, points);
    double ep = 0.0, sp = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        ep = std::max(ep, std::abs(od.correlation(100.0, points[k].second).psi - ref[k].psi));
        sp = std::max(sp, std::abs(ref[k].psi));
    }
    const double inf = steady_current(TransportModel(sc));
    // mean current over the plateau window [50, 150]; W(t)/t also carries the initial system energy
    const double plateau =
        150.0 < od.recurrence_time() ? rel((od.work_mean(0, 150.0) - od.work_mean(0, 50.0)) / 100.0, inf) : 1.0;
    const bool pass = eu < 1e-3 * su && es < 1e-3 * ss && points.size() == 41 && ep < 1e-3 * sp && plateau < 0.02;
    verdict(9, pass, "oracle equivalence (N = 300)",
            join({fmt("u", eu / su, "<", 1e-3), fmt("Sigma", es / ss, "<", 1e-3), fmt("Psi", ep / sp, "<", 1e-3),
                  fmt("current plateau", plateau, "<", 2e-2)}));
}

void noise() {
    const auto lags = linspace(0.0, 20.0, 41);
    auto deviation = [&](const NoiseKernel& k) {
        double d = 0.0, s = 0.0;
        for (double x : lags) {
            const double st = noise_stationary(k, x);
            d = std::max(d, std::abs(noise_correlation(k, 100.0, 100.0 + x) - st));
            s = std::max(s, std::abs(st));
        }
        return d / s;
    };
    const auto th = s0_thermal(2.0, 1.0);
    const auto sq = s0(BathPreparation::squeezed_thermal(1.0, 0.5), BathPreparation::thermal(1.0));
    const NoiseKernel kt(*th, 0), ks(*sq, 0);
    const double dt = deviation(kt), ds = deviation(ks);
    double drift = 0.0;
    for (double t : {0.0, 7.5, 33.0, 100.0})
        for (double x : lags) drift = std::max(drift, std::abs(noise_correlation(kt, t, t + x) - noise_correlation(kt, 55.0, 55.0 + x)));
    verdict(10, dt < 1e-3 && ds < 1e-3 && drift < 1e-10, "noise stationarity",
            join({fmt("thermal", dt, "<", 1e-3), fmt("squeezed", ds, "<", 1e-3), fmt("thermal time shift", drift, "<", 1e-10)}));
}

void thermal_second_cumulant() {
    const TransportModel m(s0_thermal(2.0, 1.0));
    const double r = rel(second_cumulant_rate(m), second_cumulant_rate_thermal(m));
    verdict(11, r < 1e-10, "thermal reduction of the second cumulant", fmt("relative difference", r, "<", 1e-10));
}

void consistency_chain() {
    double m = 0.0;
    for (const auto& sc : {s0_thermal(2.0, 1.0), s0(BathPreparation::squeezed_thermal(1.0, 0.5), BathPreparation::thermal(0.5))})
        m = std::max(m, rel(stationary_correlations(*sc, {0.0}).psi[0], asymptotic_state(*sc).Sigma(0, 0)));
    verdict(12, m < 1e-6, "Sigma_QQ stationary against Psi(0)", fmt("relative difference", m, "<", 1e-6));
}

} // namespace

int main() {
    const std::vector<std::function<void()>> criteria{equilibrium_fdt, generalized_fdt,  phi_independence,
                                                      zero_current,    linear_response, cumulants,
                                                      gallavotti_cohen, zq_symmetry,    oracle,
                                                      noise,           thermal_second_cumulant, consistency_chain};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            verdict(static_cast<int>(i + 1), false, "exception", e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
