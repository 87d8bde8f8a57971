#include "cli.hpp"

#include "config.hpp"
#include "output.hpp"
#include "tasks.hpp"

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"
#include "oscbath/version.hpp"

#include "CLI11.hpp"

#include <exception>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>

namespace oscbath::cli {

namespace {

int classify(const std::exception_ptr& ep, std::string& message) {
    try {
        std::rethrow_exception(ep);
    } catch (const ConfigError& e) {
        message = std::string("config error: ") + e.what();
        return 2;
    } catch (const InvalidPreparation& e) {
        message = std::string("invalid preparation: ") + e.what();
        return 2;
    } catch (const DomainError& e) {
        message = std::string("domain error: ") + e.what();
        return 2;
    } catch (const Unsupported& e) {
        message = std::string("unsupported: ") + e.what();
        return 2;
    } catch (const PoleError& e) {
        message = e.what();
        return 4;
    } catch (const ToleranceError& e) {
        message = std::string("tolerance failure: ") + e.what();
        return 3;
    } catch (const BranchError& e) {
        message = std::string("branch failure: ") + e.what();
        return 3;
    } catch (const BudgetExceeded& e) {
        message = std::string("tolerance failure: ") + e.what();
        return 3;
    } catch (const std::exception& e) {
        message = std::string("error: ") + e.what();
        return 1;
    } catch (...) {
        message = "error: unknown exception";
        return 1;
    }
}

json grid_json(const Grid& g) {
    const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
    return {{"origin", g.origin}, {"count", g.values.size()}, {"min", *lo}, {"max", *hi}};
}

json tolerances_json(const Tolerances& t) {
    return {{"fdt", t.fdt},
            {"equilibrium_fdt", t.equilibrium_fdt},
            {"psi_sigma", t.psi_sigma},
            {"zq_symmetry", t.zq_symmetry},
            {"cumulant", t.cumulant},
            {"gallavotti_cohen", t.gallavotti_cohen},
            {"second_cumulant_thermal", t.second_cumulant_thermal},
            {"current_consistency", t.current_consistency},
            {"linear_response", t.linear_response},
            {"noise_stationary", t.noise_stationary},
            {"noise_homogeneity", t.noise_homogeneity},
            {"oracle", t.oracle},
            {"oracle_current", t.oracle_current}};
}

json resolved_json(const RunConfig& c, const Scenario& sc) {
    json j = scenario_info(sc);
    j["grids"] = {{"frequency", grid_json(c.grids.frequency)},
                  {"lag", grid_json(c.grids.lag)},
                  {"time", grid_json(c.grids.time)},
                  {"xi", grid_json(c.grids.xi)}};
    j["tolerances"] = tolerances_json(c.tol);
    return j;
}

std::string verdict(const Check& c) {
    if (!c.passed) return "reported";
    return *c.passed ? "pass" : "FAIL";
}

int run_command(const std::string& path, const std::string& output_dir, int threads,
                const std::optional<long long>& seed, std::ostream& out, std::ostream& err) {
    std::string message;
    RunConfig cfg;
    try {
        cfg = load_config(path);
    } catch (...) {
        const int code = classify(std::current_exception(), message);
        err << message << "\n";
        return code;
    }
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    const std::filesystem::path dir(cfg.output_dir);

    json manifest;
    manifest["version"] = version;
    manifest["command"] = "run";
    manifest["task"] = task_name(cfg.task.type);
    manifest["config"] = cfg.source;
    manifest["threads"] = threads;
    manifest["seed"] = seed ? json(*seed) : json(nullptr);

    int code = 0;
    try {
        std::filesystem::create_directories(dir);
        const auto sc = build_scenario(cfg);
        manifest["resolved"] = resolved_json(cfg, *sc);
        const auto result = run_task(cfg, sc);
        json outputs = json::array();
        for (const auto& t : result.tables) {
            write_csv(dir, t);
            outputs.push_back(t.file);
        }
        manifest["outputs"] = outputs;
        manifest["checks"] = checks_json(result.checks);
        manifest["info"] = result.info;
        for (const auto& c : result.checks) {
            out << std::left << std::setw(28) << c.name << " " << format_number(c.value) << "  tol "
                << format_number(c.tolerance) << "  " << verdict(c) << "\n";
            if (c.passed && !*c.passed) code = 3;
        }
        manifest["status"] = code == 0 ? "ok" : "check_failed";
    } catch (...) {
        code = classify(std::current_exception(), message);
        manifest["status"] = "error";
        manifest["error"] = message;
        err << message << "\n";
    }
    manifest["exit_code"] = code;
    try {
        if (std::filesystem::is_directory(dir)) write_manifest(dir, manifest);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return code == 0 ? 1 : code;
    }
    if (code == 3 && message.empty()) err << "identity check failed; see " << (dir / "manifest.json").string() << "\n";
    return code;
}

int validate_command(const std::string& path, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = load_config(path);
        const auto sc = build_scenario(cfg);
        const auto j = resolved_json(cfg, *sc);
        out << "ok\n";
        out << "task " << task_name(cfg.task.type) << ", " << cfg.baths.size() << " bath(s)\n";
        out << "omega_max " << j["omega_max"].get<double>() << ", tail octaves " << j["tail_octaves"].get<int>()
            << ", grid upper " << j["grid_upper"].get<double>() << "\n";
        out << "frequency grid: " << j["nodes"].get<std::size_t>() << " nodes in " << j["panels"].get<std::size_t>()
            << " panels, achieved tolerance " << j["achieved_rel_tol"].get<double>() << "\n";
        out << "pole scan: " << j["pole_scan"]["points"].get<std::size_t>() << " points up to "
            << j["pole_scan"]["scan_max"].get<double>() << ", min |1/F| "
            << j["pole_scan"]["min_abs_denominator"].get<double>() << "\n";
        for (const char* g : {"frequency", "lag", "time", "xi"}) {
            const auto& v = j["grids"][g];
            out << g << " grid: " << v["count"].get<std::size_t>() << " points on [" << v["min"].get<double>() << ", "
                << v["max"].get<double>() << "] (" << v["origin"].get<std::string>() << ")\n";
        }
        return 0;
    } catch (...) {
        std::string message;
        const int code = classify(std::current_exception(), message);
        err << message << "\n";
        return code;
    }
}

void defaults_command(std::ostream& out) {
    for (const auto& d : defaults_table()) out << std::left << std::setw(36) << d.key << std::setw(30) << d.value << d.meaning << "\n";
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum Brownian oscillator coupled to prepared baths"};
    app.name("oscbath");
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);
    app.fallthrough();

    std::string output_dir;
    int threads = 1;
    long long seed_value = 0;
    app.add_option("--output-dir", output_dir, "directory for CSV files and manifest.json");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    auto* seed = app.add_option("--seed", seed_value, "reserved; recorded in the manifest, no randomness is used");

    std::string config;
    auto* run = app.add_subcommand("run", "run the task of a configuration");
    run->add_option("config", config, "configuration file (JSON)")->required();
    auto* validate = app.add_subcommand("validate", "check a configuration and resolve its grids");
    validate->add_option("config", config, "configuration file (JSON)")->required();
    auto* defaults = app.add_subcommand("defaults", "print the defaults table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    set_thread_count(threads);
    if (*run) return run_command(config, output_dir, threads, *seed ? std::optional<long long>(seed_value) : std::nullopt, out, err);
    if (*validate) return validate_command(config, out, err);
    if (*defaults) {
        defaults_command(out);
        return 0;
    }
    return 2;
}

} // namespace oscbath::cli
