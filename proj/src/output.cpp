#include "cswap/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cswap {

void RunRecord::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::logic_error("row has " + std::to_string(row.size()) + " entries, expected " +
                               std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    // snprintf follows LC_NUMERIC; the CLI never changes it from "C".
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string format_csv(const RunRecord& r) {
    std::ostringstream out;
    for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
    out << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << "\n";
    }
    return out.str();
}

nlohmann::json to_json(const RunRecord& r) {
    nlohmann::json j;
    j["version"] = record_version;
    j["config_format_version"] = config_format_version;
    j["kind"] = to_string(r.config.kind);
    j["seed"] = r.config.seed;
    j["config"] = emit_config(r.config);
    j["columns"] = r.columns;
    j["n_rows"] = r.rows.size();
    j["summary"] = r.summary;
    j["warnings"] = r.warnings;
    j["wall_time_s"] = r.wall_time;
    return j;
}

std::string json_path_for(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".json");
    return p.string();
}

void emit(const RunRecord& r, const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + csv_path);
        f << format_csv(r);
    }
    std::ofstream f(json_path_for(csv_path), std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + json_path_for(csv_path));
    f << to_json(r).dump(2) << "\n";
}

} // namespace cswap
