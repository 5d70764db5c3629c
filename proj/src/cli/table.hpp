#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tch/cli/config.hpp"

namespace tch::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-ordered table written as versioned CSV or as a JSON document.
struct Table {
  std::string schema;  // e.g. "tch-curve v1"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double value);

/// CSV: "# <schema>" line, header, rows at 17 significant digits.
/// JSON: {"schema", "config", "convention", "rows": [{column: value}]}.
/// Throws std::runtime_error when the file cannot be written.
void write_table(const std::string& path, OutputFormat format, const Table& table, const nlohmann::json& config,
                 const std::string& convention);

void write_json_file(const std::string& path, const nlohmann::json& document);

std::string manifest_path_for(const std::string& data_path);

}  // namespace tch::cli
