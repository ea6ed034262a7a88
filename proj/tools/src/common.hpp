#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <sbflow/cloud.hpp>

namespace sbflow_tools {

// Two-bump benchmark law 0.5 N(-2, 1) + 0.5 N(2, 1): the default initial
// condition for every particle run in the tool.
sbflow::MixtureSpec benchmark_mixture();

// Options as given on the command line or in a JSON config file, before
// per-command defaults are applied. A field left unset here means "use the
// config file value if present, otherwise the command's built-in default".
struct RawOptions {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<double> horizon;
  std::optional<int> n;
  std::optional<int> trials;
  std::optional<double> var;
  std::optional<std::string> functional;
  std::optional<std::string> mode;
  std::optional<std::vector<double>> epsilons;
  bool one_step = false;
  std::vector<std::string> perturb;  // pairs: name, delta
};

// Reads a flat JSON config file into a RawOptions. Unknown keys are an error
// so a typo in a config file cannot silently fall back to defaults.
RawOptions load_config_file(const std::string& path);

// Command-line values take precedence over config-file values.
RawOptions merge_options(const RawOptions& cli, const RawOptions& file);

// Run metadata skeleton shared by every command: the effective config echo,
// the RNG generator id, library version and git description. Commands append
// their results before writing.
nlohmann::json run_metadata(const std::string& command, const nlohmann::json& config);

// Writes content to out_dir/name, creating out_dir if needed.
void write_file(const std::string& out_dir, const std::string& name,
                const std::string& content);

// Canonical shortest round-trip decimal for CSV output.
std::string fmt_double(double v);

std::string timestamp_utc();

}  // namespace sbflow_tools
