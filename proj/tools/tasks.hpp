// tasks.hpp: the analyses behind `run`, each producing tables and checks.

#pragma once

#include "config.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oscbath::cli {

// An identity evaluated during a run. `passed` is empty for values that are
// only reported.
struct Check {
    std::string name;
    double value{0.0};
    double tolerance{0.0};
    std::optional<bool> passed;
};

struct CsvTable {
    std::string file;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // rows whose first column is text
    std::vector<std::pair<std::string, std::vector<double>>> labelled;
};

struct TaskResult {
    std::vector<Check> checks;
    std::vector<CsvTable> tables;
    json info = json::object();
};

std::shared_ptr<const Scenario> build_scenario(const RunConfig& c);
// Resolved grid and pole-scan data of a scenario.
json scenario_info(const Scenario& sc);

TaskResult run_task(const RunConfig& c, const std::shared_ptr<const Scenario>& sc);

} // namespace oscbath::cli
