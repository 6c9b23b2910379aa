#pragma once

// Experiment configuration and its JSON form. Parsing is strict: unknown
// keys, wrong types and out-of-range values raise ConfigError.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rdode/core.hpp"
#include "rdode/integrator.hpp"

namespace rdode {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct GridConfig {
  double L = 1.0;
  std::size_t ncells = 1024;
  bool operator==(const GridConfig&) const = default;
};

/// Spike initial data built from the blow-up construction.
struct TheoremScenario {
  double alpha = 0.25;
  std::optional<double> eps;          // nullopt: largest admissible value
  double u0_multiple = 1.1;           // u0(0) as a multiple of the threshold
  std::optional<double> u0_absolute;  // overrides u0_multiple when set
  std::optional<double> v0_bar;       // nullopt: kappa / b
  bool operator==(const TheoremScenario&) const = default;
};

/// Hand-specified initial data: u is "zero", "constant" or "gaussian"
/// (amplitude u_value, width u_width, centered at 0); v is constant.
struct CustomScenario {
  std::string u_profile = "zero";
  double u_value = 0.0;
  double u_width = 0.1;
  double v_value = 1.0;
  bool operator==(const CustomScenario&) const = default;
};

using Scenario = std::variant<TheoremScenario, CustomScenario>;

struct EstimatorConfig {
  std::size_t samples = 48;
  std::uint64_t seed = 20140401;
  std::optional<double> cq;  // skip sampling and use this constant
  bool operator==(const EstimatorConfig&) const = default;
};

struct DichotomyConfig {
  std::optional<double> d;  // diffusion of u in the global run; nullopt: D
  bool operator==(const DichotomyConfig&) const = default;
};

struct ConvergeConfig {
  std::vector<std::size_t> levels{256, 512, 1024, 2048};
  bool operator==(const ConvergeConfig&) const = default;
};

/// Empty axes fall back to the base configuration's value.
struct SweepConfig {
  std::vector<double> u0_multiples{1.1, 1.5, 2.0, 4.0};
  std::vector<double> eps;
  std::vector<double> alpha;
  std::vector<double> p;
  bool operator==(const SweepConfig&) const = default;
};

struct OutputsConfig {
  std::string trace_path = "trace.csv";
  std::string summary_path = "summary.json";
  std::vector<double> snapshot_times;
  std::string snapshot_prefix = "snapshot";
  std::optional<std::string> plot_path;
  bool plot_log_u = false;
  bool operator==(const OutputsConfig&) const = default;
};

struct ExperimentConfig {
  Params params{0.0, 1.0, 2.0, 1.0, 1.0, 3.0};
  Kinetics kinetics = Kinetics::identity();
  GridConfig grid;
  Scenario scenario = TheoremScenario{};
  StepControl control;
  EstimatorConfig estimator;
  DichotomyConfig dichotomy;
  ConvergeConfig converge;
  SweepConfig sweep;
  OutputsConfig outputs;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Validates ranges that do not depend on derived constants.
void validate_config(const ExperimentConfig& c);

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
/// Pretty-printed JSON containing every field.
std::string emit_config(const ExperimentConfig& c);

}  // namespace rdode
