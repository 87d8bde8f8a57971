#include "config.hpp"

#include "oscbath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace oscbath::cli {

namespace {

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& item : j.items()) {
        const auto& k = item.key();
        if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; }))
            throw ConfigError(at(path, k), "unknown key");
    }
}

const json* find(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

double number(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) throw ConfigError(at(path, key), "required");
    return number(*v, at(path, key));
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    const json* v = find(obj, key);
    return v ? number(*v, at(path, key)) : fallback;
}

double positive(const json& obj, const std::string& path, const char* key) {
    const double v = number(obj, path, key);
    if (!(v > 0.0)) throw ConfigError(at(path, key), "must be positive");
    return v;
}

std::size_t count_or(const json& obj, const std::string& path, const char* key, std::size_t fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<long long>() < 0)
        throw ConfigError(at(path, key), "expected a non-negative integer");
    return static_cast<std::size_t>(v->get<long long>());
}

std::string text(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) throw ConfigError(at(path, key), "required");
    if (!v->is_string()) throw ConfigError(at(path, key), "expected a string");
    return v->get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], at(path, i)));
    return out;
}

std::vector<double> numbers(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) throw ConfigError(at(path, key), "required");
    return numbers(*v, at(path, key));
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n > 1) v.back() = b;
    return v;
}

Grid parse_grid(const json& j, const std::string& path, double lower, bool strict) {
    Grid g;
    if (j.is_array()) {
        g.values = numbers(j, path);
        g.origin = "list";
    } else {
        only_keys(j, path, {"start", "stop", "count", "log"});
        const double a = number(j, path, "start"), b = number(j, path, "stop");
        const std::size_t n = count_or(j, path, "count", 0);
        if (n == 0) throw ConfigError(at(path, "count"), "required and positive");
        bool log = false;
        if (const json* l = find(j, "log")) {
            if (!l->is_boolean()) throw ConfigError(at(path, "log"), "expected a boolean");
            log = l->get<bool>();
        }
        if (log) {
            if (!(a > 0.0) || !(b > 0.0)) throw ConfigError(path, "log grids need positive start and stop");
            g.values = linspace(std::log(a), std::log(b), n);
            for (double& x : g.values) x = std::exp(x);
            g.values.front() = a;
            if (n > 1) g.values.back() = b;
        } else {
            g.values = linspace(a, b, n);
        }
        g.origin = "range";
    }
    if (g.values.empty()) throw ConfigError(path, "empty grid");
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double x = g.values[i];
        if (strict ? !(x > lower) : !(x >= lower))
            throw ConfigError(at(path, i), std::string("must be ") + (strict ? "> " : ">= ") + std::to_string(lower));
    }
    return g;
}

Table parse_table(const json& j, const std::string& path) {
    only_keys(j, path, {"grid", "values"});
    try {
        return Table(numbers(j, path, "grid"), numbers(j, path, "values"));
    } catch (const InvalidPreparation& e) {
        throw ConfigError(path, e.what());
    }
}

SpectralDensity parse_spectral(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const auto type = text(j, path, "type");
    if (type == "drude") {
        only_keys(j, path, {"type", "kappa", "cutoff"});
        const double kappa = number(j, path, "kappa");
        if (!(kappa >= 0.0)) throw ConfigError(at(path, "kappa"), "must be non-negative");
        return SpectralDensity::drude(kappa, positive(j, path, "cutoff"));
    }
    if (type == "tabulated") {
        only_keys(j, path, {"type", "grid", "values"});
        try {
            return SpectralDensity::tabulated(numbers(j, path, "grid"), numbers(j, path, "values"));
        } catch (const DomainError& e) {
            throw ConfigError(path, e.what());
        }
    }
    throw ConfigError(at(path, "type"), "unknown spectral density '" + type + "' (drude, tabulated)");
}

ScalarFn optional_table(const json& j, const std::string& path, const char* key) {
    const json* v = find(j, key);
    if (!v) return {};
    return [t = parse_table(*v, at(path, key))](double w) { return t(w); };
}

// Tables of the second moments on [grid.front(), grid.back()]; outside, the
// thermal state at `temperature` if given, else the ground state.
BathPreparation custom_preparation(const json& j, const std::string& path) {
    only_keys(j, path, {"type", "grid", "sigma_qq", "sigma_qp", "sigma_pp", "mean_q", "mean_p", "temperature"});
    const auto grid = numbers(j, path, "grid");
    auto column = [&](const char* key, bool required) {
        const json* v = find(j, key);
        if (!v) {
            if (required) throw ConfigError(at(path, key), "required");
            return std::vector<double>(grid.size(), 0.0);
        }
        auto c = numbers(*v, at(path, key));
        if (c.size() != grid.size()) throw ConfigError(at(path, key), "length differs from grid");
        return c;
    };
    double T = std::numeric_limits<double>::quiet_NaN();
    if (find(j, "temperature")) T = positive(j, path, "temperature");
    Table qq, qp, pp;
    try {
        qq = Table(grid, column("sigma_qq", true));
        qp = Table(grid, column("sigma_qp", false));
        pp = Table(grid, column("sigma_pp", true));
    } catch (const InvalidPreparation& e) {
        throw ConfigError(path, e.what());
    }
    const double lo = grid.front(), hi = grid.back();
    const bool thermal = std::isfinite(T);
    auto inside = [lo, hi](double w) { return w >= lo && w <= hi; };

    BathPreparation::CustomSpec spec;
    spec.sigma_qq = [=](double w) {
        if (inside(w)) return qq(w);
        return thermal ? thermal_energy(w, T) / (w * w) : 0.5 / w;
    };
    spec.sigma_qp = [=](double w) { return inside(w) ? qp(w) : 0.0; };
    spec.sigma_pp = [=](double w) {
        if (inside(w)) return pp(w);
        return thermal ? thermal_energy(w, T) : 0.5 * w;
    };
    spec.excess = [=](double w) {
        if (inside(w)) return 0.5 * (w * w * qq(w) + pp(w)) - 0.5 * w;
        return thermal ? w * bose_occupation(w, T) : 0.0;
    };
    spec.mean_q = optional_table(j, path, "mean_q");
    spec.mean_p = optional_table(j, path, "mean_p");
    spec.check_grid = grid;
    spec.check_max = std::max(100.0, 2.0 * hi);
    spec.breakpoints = grid;
    try {
        return BathPreparation::custom(std::move(spec));
    } catch (const InvalidPreparation& e) {
        throw ConfigError(path, e.what());
    }
}

BathPreparation parse_preparation(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const auto type = text(j, path, "type");
    try {
        if (type == "thermal") {
            only_keys(j, path, {"type", "temperature"});
            return BathPreparation::thermal(positive(j, path, "temperature"));
        }
        if (type == "squeezed_thermal") {
            only_keys(j, path, {"type", "temperature", "squeeze"});
            const double T = positive(j, path, "temperature");
            const json* r = find(j, "squeeze");
            if (!r) throw ConfigError(at(path, "squeeze"), "required");
            if (r->is_number()) return BathPreparation::squeezed_thermal(T, number(*r, at(path, "squeeze")));
            return BathPreparation::squeezed_thermal(T, optional_table(j, path, "squeeze"));
        }
        if (type == "displaced_thermal") {
            only_keys(j, path, {"type", "temperature", "mean_q", "mean_p"});
            return BathPreparation::displaced_thermal(positive(j, path, "temperature"), optional_table(j, path, "mean_q"),
                                                      optional_table(j, path, "mean_p"));
        }
        if (type == "effectively_thermal") {
            only_keys(j, path, {"type", "temperature", "c"});
            const double T = positive(j, path, "temperature"), c = number(j, path, "c");
            if (!(std::abs(c) <= 1.0)) throw ConfigError(at(path, "c"), "|c| must not exceed 1");
            return effectively_thermal(T, c);
        }
        if (type == "custom") return custom_preparation(j, path);
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(at(path, "type"), "unknown preparation '" + type +
                                            "' (thermal, squeezed_thermal, displaced_thermal, effectively_thermal, custom)");
}

MomentState parse_initial(const json& j, const std::string& path, double omega0) {
    only_keys(j, path, {"q", "p", "sqq", "sqp", "spp"});
    const auto g = MomentState::ground(omega0);
    const auto s = MomentState::make(number_or(j, path, "q", 0.0), number_or(j, path, "p", 0.0),
                                     number_or(j, path, "sqq", g.Sigma(0, 0)), number_or(j, path, "sqp", 0.0),
                                     number_or(j, path, "spp", g.Sigma(1, 1)));
    try {
        s.validate();
    } catch (const InvalidPreparation& e) {
        throw ConfigError(path, e.what());
    }
    return s;
}

TaskType parse_task_type(const std::string& s, const std::string& path) {
    for (auto t : {TaskType::Fdt, TaskType::Correlations, TaskType::Zq, TaskType::Current, TaskType::Cgf, TaskType::Noise,
                   TaskType::OracleCompare})
        if (s == task_name(t)) return t;
    throw ConfigError(path, "unknown task '" + s + "' (fdt, correlations, zq, current, cgf, noise, oracle-compare)");
}

TaskConfig parse_task(const json& j, const std::string& path, std::size_t nbaths) {
    only_keys(j, path, {"type", "bath", "left", "modes_per_bath", "reference_time", "delta_t", "cgf_step"});
    TaskConfig t;
    t.type = parse_task_type(text(j, path, "type"), at(path, "type"));
    t.bath = count_or(j, path, "bath", t.bath);
    t.left = count_or(j, path, "left", t.left);
    t.modes_per_bath = count_or(j, path, "modes_per_bath", t.modes_per_bath);
    if (find(j, "reference_time")) t.reference_time = positive(j, path, "reference_time");
    if (find(j, "delta_t")) t.delta_t = positive(j, path, "delta_t");
    if (find(j, "cgf_step")) t.cgf_step = positive(j, path, "cgf_step");

    if ((t.type == TaskType::Current || t.type == TaskType::Cgf) && nbaths != 2)
        throw ConfigError(at(path, "type"), "transport requires exactly two baths");
    if (t.bath >= nbaths) throw ConfigError(at(path, "bath"), "no such bath");
    if (t.left > 1) throw ConfigError(at(path, "left"), "must be 0 or 1");
    if (t.modes_per_bath == 0) throw ConfigError(at(path, "modes_per_bath"), "must be positive");
    return t;
}

Tolerances parse_tolerances(const json& j, const std::string& path) {
    only_keys(j, path,
              {"fdt", "equilibrium_fdt", "psi_sigma", "zq_symmetry", "cumulant", "gallavotti_cohen",
               "second_cumulant_thermal", "current_consistency", "linear_response", "noise_stationary",
               "noise_homogeneity", "oracle", "oracle_current"});
    Tolerances t;
    auto set = [&](const char* key, double& v) {
        if (find(j, key)) v = positive(j, path, key);
    };
    set("fdt", t.fdt);
    set("equilibrium_fdt", t.equilibrium_fdt);
    set("psi_sigma", t.psi_sigma);
    set("zq_symmetry", t.zq_symmetry);
    set("cumulant", t.cumulant);
    set("gallavotti_cohen", t.gallavotti_cohen);
    set("second_cumulant_thermal", t.second_cumulant_thermal);
    set("current_consistency", t.current_consistency);
    set("linear_response", t.linear_response);
    set("noise_stationary", t.noise_stationary);
    set("noise_homogeneity", t.noise_homogeneity);
    set("oracle", t.oracle);
    set("oracle_current", t.oracle_current);
    return t;
}

ScenarioOptions parse_numerics(const json& j, const std::string& path) {
    only_keys(j, path,
              {"pole_tol", "scan_points", "omega_max", "tail_octaves", "order", "chi_rel_tol", "chi_max_depth",
               "grid_rel_tol", "grid_max_depth", "sigma2_budget"});
    ScenarioOptions o;
    if (find(j, "pole_tol")) o.chi.pole_tol = positive(j, path, "pole_tol");
    o.chi.scan_points = count_or(j, path, "scan_points", o.chi.scan_points);
    if (find(j, "omega_max")) o.chi.omega_max = positive(j, path, "omega_max");
    if (find(j, "tail_octaves")) {
        const auto n = count_or(j, path, "tail_octaves", 0);
        if (n > 60) throw ConfigError(at(path, "tail_octaves"), "at most 60");
        o.chi.tail_octaves = static_cast<int>(n);
    }
    const auto order = count_or(j, path, "order", static_cast<std::size_t>(o.chi.order));
    if (order < 2 || order > 64) throw ConfigError(at(path, "order"), "must lie in [2, 64]");
    o.chi.order = static_cast<int>(order);
    if (find(j, "chi_rel_tol")) o.chi.rel_tol = positive(j, path, "chi_rel_tol");
    o.chi.max_depth = static_cast<int>(count_or(j, path, "chi_max_depth", static_cast<std::size_t>(o.chi.max_depth)));
    if (find(j, "grid_rel_tol")) o.rel_tol = positive(j, path, "grid_rel_tol");
    o.max_depth = static_cast<int>(count_or(j, path, "grid_max_depth", static_cast<std::size_t>(o.max_depth)));
    o.sigma2_budget = count_or(j, path, "sigma2_budget", o.sigma2_budget);
    if (o.chi.scan_points < 2) throw ConfigError(at(path, "scan_points"), "at least 2");
    return o;
}

} // namespace

std::string task_name(TaskType t) {
    switch (t) {
    case TaskType::Fdt: return "fdt";
    case TaskType::Correlations: return "correlations";
    case TaskType::Zq: return "zq";
    case TaskType::Current: return "current";
    case TaskType::Cgf: return "cgf";
    case TaskType::Noise: return "noise";
    case TaskType::OracleCompare: return "oracle-compare";
    }
    return "";
}

Grids default_grids() {
    return {{linspace(0.1, 5.0, 50), "default"},
            {linspace(0.0, 20.0, 81), "default"},
            {linspace(0.0, 50.0, 101), "default"},
            {linspace(-2.0, 2.0, 41), "default"}};
}

RunConfig parse_config(const json& j) {
    only_keys(j, "", {"schema", "scenario", "task", "grids", "tolerances", "numerics", "output"});
    const json* schema = find(j, "schema");
    if (!schema) throw ConfigError("schema", "required");
    if (!schema->is_number_integer() || schema->get<long long>() != schema_version)
        throw ConfigError("schema", "unsupported schema version (expected " + std::to_string(schema_version) + ")");

    RunConfig c;
    c.source = j;
    const json* sc = find(j, "scenario");
    if (!sc) throw ConfigError("scenario", "required");
    only_keys(*sc, "scenario", {"omega", "baths", "initial_state"});
    c.omega0 = positive(*sc, "scenario", "omega");
    const json* baths = find(*sc, "baths");
    if (!baths) throw ConfigError("scenario.baths", "required");
    if (!baths->is_array() || baths->empty()) throw ConfigError("scenario.baths", "expected a non-empty array");
    for (std::size_t i = 0; i < baths->size(); ++i) {
        const auto path = at("scenario.baths", i);
        const json& b = (*baths)[i];
        only_keys(b, path, {"spectral", "preparation"});
        const json* s = find(b, "spectral");
        const json* p = find(b, "preparation");
        if (!s) throw ConfigError(at(path, "spectral"), "required");
        if (!p) throw ConfigError(at(path, "preparation"), "required");
        c.baths.push_back({parse_spectral(*s, at(path, "spectral")), parse_preparation(*p, at(path, "preparation"))});
    }
    c.initial = MomentState::ground(c.omega0);
    if (const json* init = find(*sc, "initial_state")) c.initial = parse_initial(*init, "scenario.initial_state", c.omega0);

    const json* task = find(j, "task");
    if (!task) throw ConfigError("task", "required");
    c.task = parse_task(*task, "task", c.baths.size());

    c.grids = default_grids();
    if (const json* g = find(j, "grids")) {
        only_keys(*g, "grids", {"frequency", "lag", "time", "xi"});
        if (const json* v = find(*g, "frequency")) c.grids.frequency = parse_grid(*v, "grids.frequency", 0.0, true);
        if (const json* v = find(*g, "lag")) c.grids.lag = parse_grid(*v, "grids.lag", 0.0, false);
        if (const json* v = find(*g, "time")) c.grids.time = parse_grid(*v, "grids.time", 0.0, false);
        if (const json* v = find(*g, "xi"))
            c.grids.xi = parse_grid(*v, "grids.xi", -std::numeric_limits<double>::infinity(), true);
    }
    if (const json* t = find(j, "tolerances")) c.tol = parse_tolerances(*t, "tolerances");
    if (const json* n = find(j, "numerics")) c.numerics = parse_numerics(*n, "numerics");
    if (const json* o = find(j, "output")) {
        only_keys(*o, "output", {"dir"});
        c.output_dir = text(*o, "output", "dir");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", path + ": " + e.what());
    }
    return parse_config(j);
}

std::vector<DefaultEntry> defaults_table() {
    auto fmt = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };
    const Tolerances t;
    const TaskConfig k;
    const ScenarioOptions o;
    return {
        {"numerics.omega_max", "50 max(Omega, cutoffs)", "end of the adaptive frequency grid (largest table end for tabulated baths)"},
        {"numerics.tail_octaves", "12 with a Drude bath, else 0", "geometric panels beyond omega_max"},
        {"numerics.order", std::to_string(o.chi.order), "Gauss-Legendre nodes per panel"},
        {"numerics.chi_rel_tol", fmt(o.chi.rel_tol), "panel resolution of F(w)"},
        {"numerics.chi_max_depth", std::to_string(o.chi.max_depth), "bisection depth for F(w)"},
        {"numerics.grid_rel_tol", fmt(o.rel_tol), "panel resolution of preparation kernels"},
        {"numerics.grid_max_depth", std::to_string(o.max_depth), "bisection depth for preparation kernels"},
        {"numerics.pole_tol", fmt(o.chi.pole_tol), "smallest admissible |1/F| on the real axis"},
        {"numerics.scan_points", std::to_string(o.chi.scan_points), "pole scan resolution"},
        {"numerics.sigma2_budget", std::to_string(o.sigma2_budget), "integrand evaluations per sigma2 double integral"},
        {"grids.frequency", "0.1 .. 5, 50 points", "spectra and FDT"},
        {"grids.lag", "0 .. 20, 81 points", "correlation and noise lags s"},
        {"grids.time", "0 .. 50, 101 points", "moments, Z_Q, noise and oracle times"},
        {"grids.xi", "-2 .. 2, 41 points", "counting fields of Z_Q and G"},
        {"scenario.initial_state", "ground state of Omega", "q = p = 0, sqq = 1/(2 Omega), spp = Omega/2"},
        {"task.reference_time", fmt(k.reference_time), "noise stationarity time, oracle correlation time, centre of the oracle current window [t/2, 3t/2]"},
        {"task.modes_per_bath", std::to_string(k.modes_per_bath), "oracle modes per bath"},
        {"task.delta_t", fmt(k.delta_t), "temperature step of the linear-response finite difference"},
        {"task.cgf_step", fmt(k.cgf_step), "xi step of the five-point cumulant stencils"},
        {"tolerances.fdt", fmt(t.fdt), "generalized FDT residual"},
        {"tolerances.equilibrium_fdt", fmt(t.equilibrium_fdt), "coth relation for equal thermal baths"},
        {"tolerances.psi_sigma", fmt(t.psi_sigma), "Psi(0) against the stationary Sigma_QQ, relative"},
        {"tolerances.zq_symmetry", fmt(t.zq_symmetry), "Z_Q(-xi + iA) - Z_Q(xi)"},
        {"tolerances.cumulant", fmt(t.cumulant), "derivatives of G against the cumulant rates, relative"},
        {"tolerances.gallavotti_cohen", fmt(t.gallavotti_cohen), "G(xi) - G(-xi + iA)"},
        {"tolerances.second_cumulant_thermal", fmt(t.second_cumulant_thermal), "general against thermal second cumulant, relative"},
        {"tolerances.current_consistency", fmt(t.current_consistency), "steady current against the first cumulant, relative to the gross flux"},
        {"tolerances.linear_response", fmt(t.linear_response), "slope against a finite difference, relative"},
        {"tolerances.noise_stationary", fmt(t.noise_stationary), "S(t_ref, t_ref + s) against the stationary kernel, relative"},
        {"tolerances.noise_homogeneity", fmt(t.noise_homogeneity), "time translation of thermal noise, absolute"},
        {"tolerances.oracle", fmt(t.oracle), "oracle against analytic u, moments and Psi, relative"},
        {"tolerances.oracle_current", fmt(t.oracle_current), "oracle current plateau against the steady current, relative"},
        {"output.dir", RunConfig{}.output_dir, "directory for CSV files and manifest.json (--output-dir overrides)"},
    };
}

} // namespace oscbath::cli
