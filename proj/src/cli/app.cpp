#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

#include "tch/cli/commands.hpp"

namespace tch::cli {

namespace {

struct ParsedFlags {
  RunConfig config;
  double t_max = 0.0;
  int t_steps = 0;
  std::string format = "csv";
  std::string manifest;
  std::string replay_output;
  std::string config_file;
  CLI::Option* replay_output_opt = nullptr;
};

void add_common_options(CLI::App* sub, ParsedFlags& f) {
  auto& c = f.config;
  sub->add_option("--n-sites", c.n_sites, "chain length N")->capture_default_str();
  sub->add_option("--coupling-j", c.coupling_j, "hopping J (> 0; sets the time unit)")->capture_default_str();
  sub->add_option("--mu-over-j", c.mu_over_j, "field ratio mu/J")->capture_default_str();
  sub->add_option("--t-max", f.t_max, "largest tJ on the grid");
  sub->add_option("--t-steps", f.t_steps, "number of grid intervals (>= 1)");
  sub->add_option("--convention", c.convention, "eigenvector sign convention")
      ->check(CLI::IsMember({"plain", "alternating", "auto"}))
      ->capture_default_str();
  sub->add_option("--output,-o", c.output, "data file; the manifest goes to <output>.manifest.json");
  sub->add_option("--format", f.format, "data file format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--oracle-max-n", c.oracle_max_n, "largest chain the dense oracle may build")->capture_default_str();
  sub->add_flag("--allow-large-oracle", c.allow_large_oracle, "lift the oracle cap up to 12 sites");
  sub->add_option("--seed", c.rng_seed, "seed for random instances")->capture_default_str();
  sub->add_option("--jobs,-j", c.jobs, "worker threads (0: all hardware threads)")->capture_default_str();
  sub->add_option("--peak-prominence", c.peak_prominence, "minimum prominence of revival peaks")
      ->capture_default_str();
  sub->add_option("--config", f.config_file, "key = value file mirroring the long flags; flags win");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool flag_given(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Appends `--key=value` for every config-file entry whose flag is absent from
/// the command line. Lines are `key = value`; `#` starts a comment; quotes are stripped.
void merge_config_file(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  for (int line_no = 1; std::getline(file, line); ++line_no) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key == "config" || flag_given(args, key)) continue;
    if (key == "allow-large-oracle") {
      if (value == "true" || value == "1") extra.push_back("--" + key);
      continue;
    }
    extra.push_back("--" + key + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal Clauser-Horne inequality on the XX spin chain", "tch"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  ParsedFlags f;
  struct SubcommandInfo {
    const char* name;
    const char* help;
  };
  const SubcommandInfo subcommand_infos[] = {
      {"curve", "sample I_CH(t) for one chain"},
      {"verify", "compare the closed form against exact diagonalization"},
      {"conjecture", "scan the edge-pair contraction identity over chain lengths"},
      {"sweep", "sample I_CH(t) over lists of N and mu/J"},
      {"hv", "check the hidden-variable rewrites on random instances"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& s : subcommand_infos) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common_options(sub, f);
    subs.push_back(sub);
  }
  for (auto* sub : {subs[1], subs[3]}) {
    sub->add_option("--n-list", f.config.n_list, "chain lengths, comma separated")->delimiter(',');
    sub->add_option("--mu-list", f.config.mu_list, "mu/J values, comma separated (use --mu-list=-1,-5)")
        ->delimiter(',');
  }
  subs[2]->add_option("--n-min", f.config.n_min, "smallest chain")->capture_default_str();
  subs[2]->add_option("--n-max", f.config.n_max, "largest chain")->capture_default_str();
  subs[4]->add_option("--instances", f.config.instances, "random instances per identity")->capture_default_str();

  auto* replay_cmd = app.add_subcommand("replay", "re-run the config recorded in a manifest");
  replay_cmd->add_option("manifest", f.manifest, "manifest JSON file")->required();
  f.replay_output_opt = replay_cmd->add_option("--output,-o", f.replay_output, "write the data file here instead");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    merge_config_file(args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (replay_cmd->parsed()) {
      const std::optional<std::string> override_path =
          f.replay_output_opt->count() ? std::optional<std::string>(f.replay_output) : std::nullopt;
      return replay(f.manifest, override_path, out, err).exit_code;
    }
    RunConfig cfg = f.config;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      cfg.subcommand = subs[i]->get_name();
      // grid defaults depend on the subcommand, so only explicit values are copied
      if (subs[i]->get_option("--t-max")->count()) cfg.t_max = f.t_max;
      if (subs[i]->get_option("--t-steps")->count()) cfg.t_steps = f.t_steps;
    }
    cfg.format = f.format == "json" ? OutputFormat::json : OutputFormat::csv;
    cfg.resolve();
    return execute(cfg, out, err).exit_code;
  } catch (const VerificationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerification;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace tch::cli
