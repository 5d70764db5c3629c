#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tch/cli/config.hpp"
#include "tch/ed/oracle.hpp"

namespace tch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

/// A verification step could not run to completion (maps to exit code 2).
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string worst_case;  // human-readable location of max_deviation
};

struct ConventionChoice {
  Convention used = Convention::plain;
  std::optional<ed::ConventionResolution> probe;  // set when resolved by `auto`
};

/// Result of one subcommand. `manifest` is what gets written next to the data file.
struct CommandOutcome {
  int exit_code = kExitOk;
  std::vector<CheckResult> checks;
  nlohmann::json manifest;
};

/// `auto` runs the oracle probe; anything else is taken verbatim.
/// Throws std::runtime_error when the probe cannot single out a convention.
ConventionChoice choose_convention(const std::string& requested);

/// Runs a resolved config. Reports go to `out`, diagnostics to `err`.
/// Throws std::invalid_argument / std::length_error for usage problems and
/// std::runtime_error for I/O failures.
CommandOutcome execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Re-run the config stored in a manifest file. `output_override` redirects the data file.
CommandOutcome replay(const std::string& manifest_path, const std::optional<std::string>& output_override,
                      std::ostream& out, std::ostream& err);

/// Full command-line entry point; maps every failure to the 0/1/2 exit-code contract.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tch::cli
