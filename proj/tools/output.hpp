// output.hpp: CSV tables and the run manifest.

#pragma once

#include "tasks.hpp"

#include <filesystem>
#include <string>

namespace oscbath::cli {

// 17 significant digits in scientific notation; "nan" and "inf" as such.
std::string format_number(double v);

void write_csv(const std::filesystem::path& dir, const CsvTable& table);
json checks_json(const std::vector<Check>& checks);
void write_manifest(const std::filesystem::path& dir, const json& manifest);

} // namespace oscbath::cli
