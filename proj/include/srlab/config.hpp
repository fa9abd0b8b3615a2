#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "srlab/metrology.hpp"
#include "srlab/montecarlo.hpp"
#include "srlab/simulator.hpp"
#include "srlab/solver.hpp"
#include "srlab/target.hpp"

namespace srlab {

/// Malformed or invalid configuration text.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MonteCarloConfig {
  ParameterSpec spec = ParameterSpec::defaults();
  int n_trials = 200;
  double bin_width_m = 0.05;
};

struct SweepConfig {
  std::string parameter = "optics_mtf";
  std::vector<double> values{0.10, 0.30, 0.50};
  /// Optional second axis; empty name means a one-parameter sweep.
  std::string parameter_b;
  std::vector<double> values_b;
  int seeds_per_value = 5;
};

/// One JSON document shared by every subcommand.
struct ScenarioConfig {
  StarSpec star{};
  GridSize grid{256, 256};
  SystemParams system{};
  SolverConfig solver{};
  MeasureOptions measure{};
  MonteCarloConfig montecarlo{};
  SweepConfig sweep{};
  std::optional<std::uint64_t> seed;
  std::string output_dir = "out";

  Scenario scenario() const;
  void validate() const;
};

/// Strict parse: unknown keys and wrong types are errors. Missing keys keep
/// their defaults.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Complete document; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const ScenarioConfig& config);

}  // namespace srlab
