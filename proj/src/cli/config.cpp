#include "tch/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace tch::cli {

namespace {

struct SubcommandDefaults {
  double t_max;
  int t_steps;
};

SubcommandDefaults defaults_for(const std::string& sub) {
  if (sub == "curve" || sub == "sweep") return {20.0, 2000};
  return {3.0, 30};  // verify, conjecture: tJ = 0, 0.1, ..., 3.0
}

}  // namespace

void RunConfig::resolve() {
  static const std::vector<std::string> known{"curve", "verify", "conjecture", "sweep", "hv"};
  if (std::find(known.begin(), known.end(), subcommand) == known.end())
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");

  const auto d = defaults_for(subcommand);
  if (!t_max) t_max = d.t_max;
  if (!t_steps) t_steps = d.t_steps;
  if (*t_steps < 1) throw std::invalid_argument("--t-steps must be at least 1");
  if (!(*t_max >= 0.0) || !std::isfinite(*t_max)) throw std::invalid_argument("--t-max must be a finite value >= 0");
  if (!(coupling_j > 0.0) || !std::isfinite(coupling_j))
    throw std::invalid_argument("--coupling-j must be positive (it sets the time unit)");
  if (!std::isfinite(mu_over_j)) throw std::invalid_argument("--mu-over-j must be finite");
  if (convention != "auto") convention_from_string(convention);
  if (n_sites < 2) throw std::invalid_argument("--n-sites must be at least 2");
  if (oracle_max_n < 2 || oracle_max_n > ed::OracleLimits::kHardMaxSites)
    throw std::invalid_argument("--oracle-max-n must lie in 2..12");
  if (jobs < 0) throw std::invalid_argument("--jobs must be nonnegative");
  if (instances < 1) throw std::invalid_argument("--instances must be at least 1");
  if (!(peak_prominence >= 0.0)) throw std::invalid_argument("--peak-prominence must be nonnegative");

  if ((subcommand == "curve" || subcommand == "sweep") && output.empty())
    throw std::invalid_argument("--output is required for " + subcommand);

  if (subcommand == "verify") {
    if (n_list.empty()) n_list = {2, 3, 4, 5, 6, 7, 8};
    if (mu_list.empty()) mu_list = {-1.0, 0.0, 2.0};
  } else if (subcommand == "sweep") {
    if (n_list.empty()) n_list = {4, 8, 16, 32, 64, 128};
    if (mu_list.empty()) mu_list = {mu_over_j};
  } else if (subcommand == "conjecture") {
    if (n_min < 2 || n_max < n_min) throw std::invalid_argument("--n-min/--n-max must satisfy 2 <= n-min <= n-max");
  }
  for (int n : n_list)
    if (n < 2) throw std::invalid_argument("chain lengths must be at least 2");
  for (double mu : mu_list)
    if (!std::isfinite(mu)) throw std::invalid_argument("mu/J values must be finite");
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
  std::sort(mu_list.begin(), mu_list.end());
  mu_list.erase(std::unique(mu_list.begin(), mu_list.end()), mu_list.end());
}

int RunConfig::worker_count() const {
  if (jobs > 0) return jobs;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["subcommand"] = c.subcommand;
  j["n_sites"] = c.n_sites;
  j["coupling_j"] = c.coupling_j;
  j["mu_over_j"] = c.mu_over_j;
  j["t_max"] = c.t_max.value_or(0.0);
  j["t_steps"] = c.t_steps.value_or(0);
  j["convention"] = c.convention;
  j["output"] = c.output;
  j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  j["oracle_max_n"] = c.oracle_max_n;
  j["allow_large_oracle"] = c.allow_large_oracle;
  j["rng_seed"] = c.rng_seed;
  j["jobs"] = c.jobs;
  j["n_list"] = c.n_list;
  j["mu_list"] = c.mu_list;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["instances"] = c.instances;
  j["peak_prominence"] = c.peak_prominence;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.subcommand = j.at("subcommand").get<std::string>();
  c.n_sites = j.at("n_sites").get<int>();
  c.coupling_j = j.at("coupling_j").get<double>();
  c.mu_over_j = j.at("mu_over_j").get<double>();
  c.t_max = j.at("t_max").get<double>();
  c.t_steps = j.at("t_steps").get<int>();
  c.convention = j.at("convention").get<std::string>();
  c.output = j.value("output", std::string{});
  c.format = j.value("format", std::string("csv")) == "json" ? OutputFormat::json : OutputFormat::csv;
  c.oracle_max_n = j.value("oracle_max_n", ed::OracleLimits::kDefaultMaxSites);
  c.allow_large_oracle = j.value("allow_large_oracle", false);
  c.rng_seed = j.value("rng_seed", std::uint64_t{20241122});
  c.jobs = j.value("jobs", 0);
  c.n_list = j.value("n_list", std::vector<int>{});
  c.mu_list = j.value("mu_list", std::vector<double>{});
  c.n_min = j.value("n_min", 2);
  c.n_max = j.value("n_max", 10);
  c.instances = j.value("instances", 100);
  c.peak_prominence = j.value("peak_prominence", 0.01);
  return c;
}

}  // namespace tch::cli
