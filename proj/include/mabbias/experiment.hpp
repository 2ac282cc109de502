#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mabbias/serialization.hpp"

namespace mabbias {

std::vector<std::string> run_preset_names();
/// Frozen experiment presets: E1, E2, E2alt, E3, E4, E5, nonadaptive.
ExperimentConfig preset(std::string_view name);

struct CheckPreset {
  std::string name;
  std::string summary;
  FiniteInstance instance;
  std::vector<Property> properties;
};

std::vector<std::string> check_preset_names();
CheckPreset check_preset(std::string_view name);

/// "lo:hi:n"
CdfGrid parse_grid(std::string_view text);

/// $MABBIAS_OUT_DIR, else "mabbias-out".
std::string default_output_dir();

struct RunOverrides {
  std::optional<std::int64_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<CdfGrid> grid;
  bool plot = false;
  int threads = 1;
  std::int64_t dump_traces = 0;
};

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 2 some condition never occurred
  BiasReport report;
  std::vector<std::string> files;
};

/// Estimates the biases and writes <out>/<name>.csv and .json (plus .svg and traces on request).
RunOutcome run_experiment(ExperimentConfig config, const RunOverrides& overrides, std::ostream& log);

/// Average conditional CDF curves against the true CDF, one panel per arm.
void write_cdf_svg(std::ostream& out, const BiasReport& report, const std::string& title);

struct CheckOutcome {
  int exit_code = 0;  // 0 pass, 3 counterexample
  std::vector<MonotonicityReport> reports;
  std::string json_path;
};

CheckOutcome run_check(CheckPreset preset, std::optional<std::uint64_t> max_tables, const std::string& out_dir,
                       int threads, std::ostream& log);

/// Re-runs the counterexample stored in a check JSON file. Returns 3 when the
/// violation reproduces, 0 otherwise.
int replay_file(const std::string& path, std::ostream& log);

}  // namespace mabbias
