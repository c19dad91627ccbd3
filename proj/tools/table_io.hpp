#pragma once

#include <string>
#include <vector>

// vendored single-header json
#include <json.hpp>

namespace selprior::cli {

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json metadata;
};

// locale-independent formatting, 10 significant digits
std::string format_value(double x);

// comma-separated, header row, '.' decimals, LF endings; written to a
// temporary file and renamed into place
void write_csv_atomic(const std::string& path, const ResultTable& table);
void write_json_atomic(const std::string& path, const nlohmann::json& doc);

std::uint64_t fnv1a(const std::string& text);

} // namespace selprior::cli
