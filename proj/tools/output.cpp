#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oscbath::cli {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::ofstream open(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    return out;
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_csv(const std::filesystem::path& dir, const CsvTable& table) {
    auto out = open(dir / table.file);
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << quote(table.columns[i]);
    out << "\r\n";
    for (const auto& [label, row] : table.labelled) {
        out << quote(label);
        for (double v : row) out << ',' << format_number(v);
        out << "\r\n";
    }
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << "\r\n";
    }
    if (!out) throw std::runtime_error("failed writing " + (dir / table.file).string());
}

json checks_json(const std::vector<Check>& checks) {
    json a = json::array();
    for (const auto& c : checks) {
        json j;
        j["name"] = c.name;
        j["value"] = std::isfinite(c.value) ? json(c.value) : json(format_number(c.value));
        j["tolerance"] = c.tolerance;
        j["passed"] = c.passed ? json(*c.passed) : json(nullptr);
        a.push_back(std::move(j));
    }
    return a;
}

void write_manifest(const std::filesystem::path& dir, const json& manifest) {
    auto out = open(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing manifest.json");
}

} // namespace oscbath::cli
