#include "table.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tch::cli {

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

std::string csv_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, cell);
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  return file;
}

void close_or_throw(std::ofstream& file, const std::string& path) {
  file.close();
  if (!file) throw std::runtime_error("failed while writing '" + path + "'");
}

}  // namespace

void write_table(const std::string& path, OutputFormat format, const Table& table, const nlohmann::json& config,
                 const std::string& convention) {
  auto file = open_or_throw(path);
  if (format == OutputFormat::csv) {
    file << "# " << table.schema << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) file << (c ? "," : "") << table.columns[c];
    file << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) file << (c ? "," : "") << csv_cell(row[c]);
      file << '\n';
    }
  } else {
    nlohmann::ordered_json doc;
    doc["schema"] = table.schema;
    nlohmann::json location_free = config;  // data bytes must not depend on where they are written
    location_free.erase("output");
    doc["config"] = location_free;
    doc["convention"] = convention;
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = json_cell(row[c]);
      rows.push_back(std::move(obj));
    }
    file << doc.dump(2) << '\n';
  }
  close_or_throw(file, path);
}

void write_json_file(const std::string& path, const nlohmann::json& document) {
  auto file = open_or_throw(path);
  file << document.dump(2) << '\n';
  close_or_throw(file, path);
}

std::string manifest_path_for(const std::string& data_path) { return data_path + ".manifest.json"; }

}  // namespace tch::cli
