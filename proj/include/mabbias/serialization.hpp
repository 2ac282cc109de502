#pragma once

#include <string>

#include "json.hpp"
#include "mabbias/bias_lab.hpp"
#include "mabbias/oracle.hpp"

namespace mabbias {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Everything needed to reproduce one Monte Carlo experiment.
struct ExperimentConfig {
  std::string name;
  ExperimentDesign design;
  EstimateOptions options;
  std::string output_dir;  // empty: caller decides
};

// All parsers throw ConfigError with the offending field on malformed input.
Json to_json(const ArmSpec& arm);
ArmSpec arm_from_json(const Json& j);
Json to_json(const SamplingRule& rule);
SamplingRule sampling_from_json(const Json& j);
Json to_json(const StoppingRule& rule);
StoppingRule stopping_from_json(const Json& j);
Json to_json(const ChoosingRule& rule);
ChoosingRule choosing_from_json(const Json& j);
Json to_json(const FunctionalSpec& f);
FunctionalSpec functional_from_json(const Json& j);

Json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);

Json to_json(const BiasReport& report);
Json to_json(const FiniteInstance& inst);
FiniteInstance instance_from_json(const Json& j);
Json to_json(const Counterexample& cx);
Counterexample counterexample_from_json(const Json& j);
Json to_json(const MonotonicityReport& report);

}  // namespace mabbias
