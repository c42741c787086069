#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cswap/config.hpp"

namespace cswap {

inline constexpr const char* record_version = "cswap-run/1";

struct RunRecord {
    ExperimentConfig config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json summary = nlohmann::json::object();
    double wall_time = 0.0;   // s, JSON only so the CSV stays byte-stable
    std::vector<std::string> warnings;

    void add_row(std::vector<double> row);
};

// Header plus one line per row, 12 significant digits, '.' decimal.
std::string format_csv(const RunRecord& r);
nlohmann::json to_json(const RunRecord& r);

// Writes <path> (CSV) and <path minus extension>.json.
void emit(const RunRecord& r, const std::string& csv_path);
std::string json_path_for(const std::string& csv_path);

// Number formatting shared by CSV and the table printers.
std::string format_number(double v);

} // namespace cswap
