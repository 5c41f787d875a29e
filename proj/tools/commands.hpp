#pragma once

// Subcommands of the wanderlab tool. Each command builds a JSON report and
// a verdict; the driver writes the report and a manifest into the output
// directory and maps the verdict onto the exit-code contract:
//   0  every enabled check passed
//   2  a check failed (or a certificate could not be established)
//   1  usage error (bad flags, unreadable or invalid config, I/O failure)

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wanderlab/parameters.hpp"

namespace wanderlab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailed = 2;

struct RunConfig {
  std::string command;
  std::optional<std::string> config_path;
  nlohmann::json config = nlohmann::json::object();  // raw document (never modified)
  ParameterSet params;
  std::string out_dir = "wanderlab_out";
  std::optional<long> n;
  bool json = false;
};

struct CommandResult {
  nlohmann::json report;
  nlohmann::json verdicts = nlohmann::json::object();  // check name -> bool
  std::vector<std::string> lines;     // human-readable summary
  std::vector<std::string> artifacts; // extra files written (relative names)
  bool pass = false;
};

CommandResult cmd_geometry(const RunConfig& cfg);
CommandResult cmd_orbit(const RunConfig& cfg);
CommandResult cmd_disks(const RunConfig& cfg);
CommandResult cmd_wander(const RunConfig& cfg);
CommandResult cmd_compose(const RunConfig& cfg);
CommandResult cmd_render(const RunConfig& cfg);
CommandResult cmd_report(const RunConfig& cfg);

/// 64-bit FNV-1a over the bytes of s.
std::uint64_t fnv1a64(const std::string& s);

/// Hash of the effective configuration: the parameter set, the raw command
/// sections of the config document and the command options.
std::string config_hash(const RunConfig& cfg);

/// Full driver: parses argv, runs the command, writes artifacts, prints the
/// summary (or the JSON report with --json) and returns the exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wanderlab::cli
