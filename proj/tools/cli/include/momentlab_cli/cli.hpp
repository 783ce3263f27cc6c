#pragma once

// Command-line surface: experiment configs, the five subcommands and their
// JSON reports. Exit codes: 0 pass, 2 verification failure, 1 usage error.

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;

/// Everything needed to reproduce a run. Unset optionals take per-command defaults.
struct ExperimentConfig {
  std::string command;
  std::string model;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  std::optional<int> samples;
  std::optional<int> grid;
  std::string out_dir = "momentlab-out";
  bool plot = false;
  bool normalized = false;
  std::vector<double> x0;
  std::vector<double> xi;
  std::optional<double> t_end;
  std::optional<double> step;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Thrown for malformed configs; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& command_names();

nlohmann::json to_json(const ExperimentConfig& c);
/// Rejects unknown keys and ill-typed values with ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& c, const std::string& path);

/// Model-definition file {"name": ..., "params": {...}}; unknown keys rejected.
struct ModelSpec {
  std::string name;
  std::map<std::string, double> params;
};
ModelSpec load_model_spec(const std::string& path);

/// Parses "k=v" into a (key, value) pair; ConfigError on malformed input.
std::pair<std::string, double> parse_param(const std::string& kv);
/// Comma separated reals.
std::vector<double> parse_vector(const std::string& text);

/// Runs a fully resolved config, writing report.json and artifacts into
/// out_dir. Returns the exit code.
int execute(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// argv without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Report text with the generated_at field removed, for determinism checks.
std::string strip_timestamp(const std::string& report_text);

}  // namespace cli
