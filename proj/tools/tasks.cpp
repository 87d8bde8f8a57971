#include "tasks.hpp"

#include "oscbath/correlations.hpp"
#include "oscbath/genfunc.hpp"
#include "oscbath/noise.hpp"
#include "oscbath/oracle.hpp"
#include "oscbath/transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace oscbath::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double pi = 3.141592653589793238462643383279502884;

Check check(std::string name, double value, double tol) { return {std::move(name), value, tol, value <= tol}; }
Check report(std::string name, double value, double tol) { return {std::move(name), value, tol, std::nullopt}; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool thermal_kind(const BathPreparation& p) { return p.kind() == BathPreparation::Kind::Thermal; }

// Common temperature if every bath is in a thermal state at the same T.
std::optional<double> common_temperature(const Scenario& sc) {
    std::optional<double> T;
    for (const auto& b : sc.baths()) {
        if (!b.preparation.thermal_second_moments()) return std::nullopt;
        const double t = b.preparation.temperature();
        if (T && *T != t) return std::nullopt;
        T = t;
    }
    return T;
}

// (1/2 pi) int T(w) (E_l + E_r) dw: the current with either bath alone populated,
// the scale against which a vanishing net current is measured.
double gross_flux(const TransportModel& m) {
    const auto& w = m.scenario().nodes();
    std::vector<double> f(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        f[i] = m.transmission()[i] * w[i] * (m.occupation_left()[i] + m.occupation_right()[i] + 1.0) / (2.0 * pi);
    return m.scenario().grid().integrate(f);
}

TaskResult fdt_task(const RunConfig& c, const Scenario& sc) {
    TaskResult r;
    const auto& w = c.grids.frequency.values;
    const auto rep = fdt_check(sc, w);
    CsvTable t{"fdt.csv", {"omega", "psi", "phi_over_i", "fdt_rhs", "psi_over_phi", "t_eff"}, {}, {}};
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double phi = phi_spectrum(sc, w[i]);
        const auto te = effective_temperature(sc, w[i]);
        t.rows.push_back({w[i], rep.lhs[i], phi, rep.rhs[i], rep.lhs[i] / phi, te.valid ? te.value : nan});
    }
    r.tables.push_back(std::move(t));
    r.checks.push_back(check("generalized_fdt_residual", rep.residual, c.tol.fdt));
    if (const auto T = common_temperature(sc)) {
        r.checks.push_back(check("equilibrium_fdt_residual", equilibrium_fdt_residual(sc, w, *T), c.tol.equilibrium_fdt));
        r.info["equilibrium_temperature"] = *T;
    }
    const auto th = thermalization_check(sc, w, c.tol.equilibrium_fdt);
    r.info["effective_temperature"] = {{"constant", th.passed}, {"min", th.t_min}, {"max", th.t_max},
                                       {"invalid_points", th.invalid_points}};
    return r;
}

TaskResult correlations_task(const RunConfig& c, const Scenario& sc) {
    TaskResult r;
    const auto& lags = c.grids.lag.values;
    const auto cr = stationary_correlations(sc, lags);
    CsvTable t{"correlations.csv", {"s", "psi", "phi"}, {}, {}};
    for (std::size_t i = 0; i < lags.size(); ++i) t.rows.push_back({lags[i], cr.psi[i], cr.phi[i]});
    r.tables.push_back(std::move(t));
    const double psi0 = stationary_correlations(sc, {0.0}).psi[0];
    const double sqq = asymptotic_state(sc).Sigma(0, 0);
    r.checks.push_back(check("psi0_vs_sigma_qq", rel(psi0, sqq), c.tol.psi_sigma));
    r.info["psi0"] = psi0;
    r.info["sigma_qq_stationary"] = sqq;
    return r;
}

TaskResult zq_task(const RunConfig& c, const Scenario& sc) {
    TaskResult r;
    const auto& times = c.grids.time.values;
    const auto& xis = c.grids.xi.values;
    const auto states = propagate(sc, c.initial, times);
    CsvTable m{"moments.csv", {"t", "mean_q", "mean_p", "sigma_qq", "sigma_qp", "sigma_pp", "gc_shift"}, {}, {}};
    CsvTable z{"zq.csv", {"t", "xi", "re", "im"}, {}, {}};
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto& s = states[i];
        const double A = gc_shift(s);
        m.rows.push_back({times[i], s.X(0), s.X(1), s.Sigma(0, 0), s.Sigma(0, 1), s.Sigma(1, 1), A});
        for (double x : xis) {
            const auto v = zq(s, x);
            z.rows.push_back({times[i], x, v.real(), v.imag()});
            worst = std::max(worst, std::abs(zq(s, cplx(-x, A)) - v));
        }
    }
    r.tables.push_back(std::move(m));
    r.tables.push_back(std::move(z));
    r.checks.push_back(check("zq_symmetry", worst, c.tol.zq_symmetry));
    return r;
}

std::shared_ptr<const Scenario> with_temperatures(const Scenario& sc, std::size_t left, double tl, double tr) {
    auto baths = sc.baths();
    baths[left].preparation = BathPreparation::thermal(tl);
    baths[1 - left].preparation = BathPreparation::thermal(tr);
    return std::make_shared<const Scenario>(sc.omega0(), std::move(baths), sc.options());
}

TaskResult current_task(const RunConfig& c, const std::shared_ptr<const Scenario>& sc) {
    TaskResult r;
    const TransportModel m(sc, c.task.left);
    const double I = steady_current(m), I1 = first_cumulant_rate(m), S = second_cumulant_rate(m), gross = gross_flux(m);
    CsvTable t{"transport.csv", {"quantity", "value"}, {}, {}};
    auto row = [&](const char* name, double v) { t.labelled.push_back({name, {v}}); };
    row("steady_current", I);
    row("first_cumulant_rate", I1);
    row("second_cumulant_rate", S);
    row("gross_flux", gross);
    r.checks.push_back(check("current_vs_first_cumulant", std::abs(I - I1) / gross, c.tol.current_consistency));

    const auto& bl = sc->baths()[m.left()].preparation;
    const auto& br = sc->baths()[m.right()].preparation;
    if (thermal_kind(bl) && thermal_kind(br)) {
        const double st = second_cumulant_rate_thermal(m);
        row("second_cumulant_rate_thermal", st);
        r.checks.push_back(check("second_cumulant_thermal", rel(S, st), c.tol.second_cumulant_thermal));

        const double tr = br.temperature(), h = c.task.delta_t;
        const double slope = linear_response_slope(m, tr);
        const double fd = (steady_current(TransportModel(with_temperatures(*sc, m.left(), tr + h, tr), m.left())) -
                           steady_current(TransportModel(with_temperatures(*sc, m.left(), tr - h, tr), m.left()))) /
                          (2.0 * h);
        row("linear_response_slope", slope);
        row("linear_response_slope_fd", fd);
        row("linear_response_current", linear_response_current(m, tr, bl.temperature() - tr));
        r.checks.push_back(check("linear_response_vs_fd", rel(slope, fd), c.tol.linear_response));
    }
    r.tables.push_back(std::move(t));
    return r;
}

TaskResult cgf_task(const RunConfig& c, const std::shared_ptr<const Scenario>& sc) {
    TaskResult r;
    const TransportModel m(sc, c.task.left);
    const auto& xis = c.grids.xi.values;
    CsvTable t{"cgf.csv", {"xi", "re", "im"}, {}, {}};
    for (double x : xis) {
        const auto g = cgf(m, x);
        t.rows.push_back({x, g.real(), g.imag()});
    }
    r.tables.push_back(std::move(t));

    const double h = c.task.cgf_step;
    const cplx gp1 = cgf(m, h), gm1 = cgf(m, -h), gp2 = cgf(m, 2.0 * h), gm2 = cgf(m, -2.0 * h), g0 = cgf(m, 0.0);
    const double d1 = ((-gp2 + 8.0 * gp1 - 8.0 * gm1 + gm2) / (12.0 * h)).imag();
    const double d2 = -((-gp2 + 16.0 * gp1 - 30.0 * g0 + 16.0 * gm1 - gm2) / (12.0 * h * h)).real();
    const double I = steady_current(m), S = second_cumulant_rate(m), gross = gross_flux(m);
    // a vanishing net current is compared on the scale of the gross flux
    const double scale = std::abs(I) > 1e-8 * gross ? std::abs(I) : gross;
    r.checks.push_back(check("cgf_first_derivative", std::abs(d1 - I) / scale, c.tol.cumulant));
    r.checks.push_back(check("cgf_second_derivative", rel(d2, S), c.tol.cumulant));
    r.info["steady_current"] = I;
    r.info["second_cumulant_rate"] = S;

    const auto a = affinity(m);
    r.info["affinity"] = {{"constant", a.constant}, {"A", a.A},           {"beta_l_min", a.beta_l_min},
                          {"beta_l_max", a.beta_l_max}, {"beta_r_min", a.beta_r_min}, {"beta_r_max", a.beta_r_max},
                          {"invalid_points", a.invalid_points}};
    const double gc = gc_residual(m, xis, a.A);
    r.checks.push_back(a.constant ? check("gallavotti_cohen", gc, c.tol.gallavotti_cohen)
                                  : report("gallavotti_cohen", gc, c.tol.gallavotti_cohen));
    return r;
}

TaskResult noise_task(const RunConfig& c, const Scenario& sc) {
    TaskResult r;
    const NoiseKernel k(sc, c.task.bath);
    const auto& times = c.grids.time.values;
    const auto& lags = c.grids.lag.values;
    const double tref = c.task.reference_time;

    std::vector<double> stat(lags.size()), at_ref(lags.size());
    double scale = 0.0, dev = 0.0;
    for (std::size_t j = 0; j < lags.size(); ++j) {
        stat[j] = noise_stationary(k, lags[j]);
        at_ref[j] = noise_correlation(k, tref, tref + lags[j]);
        scale = std::max(scale, std::abs(stat[j]));
        dev = std::max(dev, std::abs(at_ref[j] - stat[j]));
    }
    CsvTable t{"noise.csv", {"t", "s", "S", "S_stationary"}, {}, {}};
    double drift = 0.0;
    for (double ti : times)
        for (std::size_t j = 0; j < lags.size(); ++j) {
            const double v = noise_correlation(k, ti, ti + lags[j]);
            t.rows.push_back({ti, lags[j], v, stat[j]});
            drift = std::max(drift, std::abs(v - at_ref[j]));
        }
    CsvTable kt{"kernel.csv", {"t", "noise_mean", "friction_kernel"}, {}, {}};
    const auto& spec = sc.baths()[c.task.bath].spectrum;
    for (double ti : times) kt.rows.push_back({ti, noise_mean(k, ti), friction_kernel(spec, ti)});
    r.tables.push_back(std::move(t));
    r.tables.push_back(std::move(kt));

    r.checks.push_back(check("noise_stationary", dev / scale, c.tol.noise_stationary));
    const auto& prep = sc.baths()[c.task.bath].preparation;
    if (prep.thermal_second_moments() && !prep.has_sigma2())
        r.checks.push_back(check("noise_homogeneity", drift, c.tol.noise_homogeneity));
    r.info["reference_time"] = tref;
    return r;
}

struct Compare {
    std::string quantity;
    std::vector<std::array<double, 4>> rows; // t, s, analytic, oracle
};

TaskResult oracle_task(const RunConfig& c, const std::shared_ptr<const Scenario>& sc) {
    TaskResult r;
    OracleOptions transient, plain;
    transient.modes_per_bath = plain.modes_per_bath = c.task.modes_per_bath;
    transient.layout = ModeLayout::transient();
    const Oracle ot(c.omega0, c.baths, c.initial, transient);
    const Oracle od(c.omega0, c.baths, c.initial, plain);
    const double rt = ot.recurrence_time(), rd = od.recurrence_time(), tref = c.task.reference_time;
    r.info["modes_per_bath"] = c.task.modes_per_bath;
    r.info["recurrence_time_transient_layout"] = rt;
    r.info["recurrence_time_default_layout"] = rd;

    std::vector<double> times;
    for (double t : c.grids.time.values)
        if (t < rt) times.push_back(t);
    const double horizon = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
    const auto resp = sc->response(horizon);
    const auto states = propagate(*sc, c.initial, times);

    Compare u{"u", {}}, q{"mean_q", {}}, p{"mean_p", {}}, sqq{"sigma_qq", {}}, sqp{"sigma_qp", {}}, spp{"sigma_pp", {}};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const auto o = ot.system_state(t);
        const auto& a = states[i];
        u.rows.push_back({t, 0.0, resp->u(t), ot.u(t)});
        q.rows.push_back({t, 0.0, a.X(0), o.X(0)});
        p.rows.push_back({t, 0.0, a.X(1), o.X(1)});
        sqq.rows.push_back({t, 0.0, a.Sigma(0, 0), o.Sigma(0, 0)});
        sqp.rows.push_back({t, 0.0, a.Sigma(0, 1), o.Sigma(0, 1)});
        spp.rows.push_back({t, 0.0, a.Sigma(1, 1), o.Sigma(1, 1)});
    }
    Compare psi{"psi", {}};
    std::vector<std::pair<double, double>> points;
    for (double s : c.grids.lag.values)
        if (tref + s < rd) points.emplace_back(tref, s);
    const auto ft = finite_time_correlations(*sc, c.initial, points);
    for (std::size_t k = 0; k < points.size(); ++k)
        psi.rows.push_back({tref, points[k].second, ft[k].psi, od.correlation(tref, points[k].second).psi});

    auto max_abs = [](const std::vector<const Compare*>& group) {
        double m = 0.0;
        for (const auto* g : group)
            for (const auto& row : g->rows) m = std::max(m, std::abs(row[2]));
        return m;
    };
    const double sigma_scale = max_abs({&sqq, &sqp, &spp});
    double qq_max = 0.0;
    for (const auto& row : sqq.rows) qq_max = std::max(qq_max, row[2]);
    const double mean_scale = std::max(max_abs({&q, &p}), std::sqrt(qq_max));

    CsvTable t{"oracle_compare.csv", {"quantity", "t", "s", "analytic", "oracle", "delta", "scale"}, {}, {}};
    auto emit = [&](const std::string& name, const std::vector<const Compare*>& group, double scale, double tol) {
        double worst = 0.0;
        bool any = false;
        for (const auto* g : group)
            for (const auto& row : g->rows) {
                const double d = row[3] - row[2];
                t.labelled.push_back({g->quantity, {row[0], row[1], row[2], row[3], d, scale}});
                worst = std::max(worst, std::abs(d) / scale);
                any = true;
            }
        r.checks.push_back(check("oracle_" + name, any ? worst : nan, tol));
    };
    emit("u", {&u}, max_abs({&u}), c.tol.oracle);
    emit("mean", {&q, &p}, mean_scale, c.tol.oracle);
    emit("sigma", {&sqq, &sqp, &spp}, sigma_scale, c.tol.oracle);
    emit("psi", {&psi}, max_abs({&psi}), c.tol.oracle);

    if (sc->size() == 2) {
        const double I = steady_current(TransportModel(sc, c.task.left));
        Compare cur{"current_plateau", {}};
        // mean current on [tref/2, 3 tref/2]; W(t)/t also carries the initial system energy
        if (1.5 * tref < rd)
            cur.rows.push_back({tref, 0.0, I, (od.work_mean(c.task.left, 1.5 * tref) - od.work_mean(c.task.left, 0.5 * tref)) / tref});
        emit("current_plateau", {&cur}, std::abs(I), c.tol.oracle_current);
    }
    r.tables.push_back(std::move(t));
    return r;
}

} // namespace

std::shared_ptr<const Scenario> build_scenario(const RunConfig& c) {
    return std::make_shared<const Scenario>(c.omega0, c.baths, c.numerics);
}

json scenario_info(const Scenario& sc) {
    const auto& chi = sc.susceptibility();
    const auto& pr = chi.pole_report();
    json j;
    j["omega_max"] = chi.omega_max();
    j["tail_octaves"] = chi.tail_octaves();
    j["grid_upper"] = sc.grid().upper();
    j["order"] = sc.grid().order();
    j["panels"] = sc.grid().panel_count();
    j["nodes"] = sc.grid().size();
    j["achieved_rel_tol"] = sc.grid_diagnostics().achieved_rel_tol;
    j["unresolved_panels"] = sc.grid_diagnostics().unresolved_panels;
    j["susceptibility_achieved_rel_tol"] = chi.grid_diagnostics().achieved_rel_tol;
    j["susceptibility_unresolved_panels"] = chi.grid_diagnostics().unresolved_panels;
    j["pole_scan"] = {{"passed", pr.passed},
                      {"points", pr.points},
                      {"scan_max", pr.scan_max},
                      {"min_abs_denominator", pr.min_abs_denominator}};
    return j;
}

TaskResult run_task(const RunConfig& c, const std::shared_ptr<const Scenario>& sc) {
    switch (c.task.type) {
    case TaskType::Fdt: return fdt_task(c, *sc);
    case TaskType::Correlations: return correlations_task(c, *sc);
    case TaskType::Zq: return zq_task(c, *sc);
    case TaskType::Current: return current_task(c, sc);
    case TaskType::Cgf: return cgf_task(c, sc);
    case TaskType::Noise: return noise_task(c, *sc);
    case TaskType::OracleCompare: return oracle_task(c, sc);
    }
    return {};
}

} // namespace oscbath::cli
