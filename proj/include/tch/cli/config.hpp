#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tch/ed/operators.hpp"

namespace tch::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { csv, json };

/// Fully resolved options of one run. Times are given in units of 1/J
/// (t_max is a tJ value).
struct RunConfig {
  std::string subcommand;
  int n_sites = 8;
  double coupling_j = 1.0;
  double mu_over_j = -1.0;
  std::optional<double> t_max;
  std::optional<int> t_steps;
  std::string convention = "auto";  // plain | alternating | auto
  std::string output;               // empty: no data file (report only)
  OutputFormat format = OutputFormat::csv;
  int oracle_max_n = ed::OracleLimits::kDefaultMaxSites;
  bool allow_large_oracle = false;
  std::uint64_t rng_seed = 20241122;
  int jobs = 0;  // 0: hardware concurrency

  // list-valued inputs of verify / sweep / conjecture
  std::vector<int> n_list;
  std::vector<double> mu_list;
  int n_min = 2;
  int n_max = 10;
  int instances = 100;
  double peak_prominence = 0.01;

  /// Fill subcommand-dependent defaults and reject inconsistent values
  /// (std::invalid_argument).
  void resolve();

  double mu() const { return mu_over_j * coupling_j; }
  int worker_count() const;
  ed::OracleLimits oracle_limits() const { return {oracle_max_n, allow_large_oracle}; }
};

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace tch::cli
