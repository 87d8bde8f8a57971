// config.hpp: run configuration, its JSON schema and the defaults table.

#pragma once

#include "oscbath/genfunc.hpp"
#include "oscbath/scenario.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace oscbath::cli {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// Malformed or out-of-domain configuration; `path` names the field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

enum class TaskType { Fdt, Correlations, Zq, Current, Cgf, Noise, OracleCompare };
std::string task_name(TaskType t);

struct Tolerances {
    double fdt{1e-10};
    double equilibrium_fdt{1e-8};
    double psi_sigma{1e-6};
    double zq_symmetry{1e-12};
    double cumulant{1e-6};
    double gallavotti_cohen{1e-8};
    double second_cumulant_thermal{1e-10};
    double current_consistency{1e-10};
    double linear_response{1e-3};
    double noise_stationary{1e-3};
    double noise_homogeneity{1e-10};
    double oracle{1e-3};
    double oracle_current{0.02};
};

struct TaskConfig {
    TaskType type{TaskType::Fdt};
    std::size_t bath{0};            // noise
    std::size_t left{0};            // current, cgf
    std::size_t modes_per_bath{300}; // oracle-compare
    double reference_time{100.0};   // noise, oracle-compare
    double delta_t{1e-3};           // current: finite-difference step in T
    double cgf_step{2e-3};          // cgf: five-point stencil step in xi
};

struct Grid {
    std::vector<double> values;
    std::string origin; // "default", "list" or "range"
};

struct Grids {
    Grid frequency, lag, time, xi;
};
Grids default_grids();

struct RunConfig {
    json source;
    double omega0{1.0};
    std::vector<Bath> baths;
    MomentState initial;
    ScenarioOptions numerics;
    TaskConfig task;
    Grids grids;
    Tolerances tol;
    std::string output_dir{"oscbath-out"};
};

RunConfig parse_config(const json& j);
// Reads and parses a file; JSON syntax errors become ConfigError.
RunConfig load_config(const std::string& path);

struct DefaultEntry {
    std::string key, value, meaning;
};
std::vector<DefaultEntry> defaults_table();

} // namespace oscbath::cli
