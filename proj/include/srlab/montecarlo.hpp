#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "srlab/metrology.hpp"
#include "srlab/simulator.hpp"
#include "srlab/solver.hpp"
#include "srlab/target.hpp"

namespace srlab {

enum class Distribution { kGaussianTruncated, kUniformContinuous, kUniformDiscrete };

const char* to_string(Distribution d);
Distribution distribution_from_string(const std::string& name);

/// Sampling law of one system parameter.
struct ParameterDist {
  std::string name;
  double nominal = 0.0;
  double low = 0.0;
  double high = 0.0;
  Distribution distribution = Distribution::kGaussianTruncated;
  std::vector<double> discrete_values;

  void validate() const;
  /// Gaussian: mean nominal, sigma (high - low) / 6, rejected into
  /// [low, high]. Uniform-continuous on [low, high]. Uniform-discrete over
  /// discrete_values.
  double draw(std::mt19937_64& rng) const;
};

/// Names accepted by set_parameter / sweep.
inline constexpr const char* kParameterNames[] = {
    "optics_mtf", "clock_phases",      "jitter",           "snr",
    "subarray_shift", "assumed_psf_sigma", "assumed_psf_radius"};

/// Assigns a named parameter; throws std::invalid_argument for unknown names.
void set_parameter(SystemParams& params, const std::string& name, double value);
double get_parameter(const SystemParams& params, const std::string& name);

struct ParameterSpec {
  std::vector<ParameterDist> parameters;

  /// Monte Carlo table defaults.
  static ParameterSpec defaults();

  const ParameterDist& find(const std::string& name) const;
  ParameterDist& find(const std::string& name);
  /// Applies every nominal value on top of `base`.
  SystemParams nominal(const SystemParams& base = {}) const;
  void validate() const;
};

/// Everything a trial needs besides the sampled system parameters.
struct Scenario {
  StarSpec star{};
  GridSize grid{256, 256};
  SolverConfig solver{};
  MeasureOptions measure{};
  SystemParams base{};  // geometry, decimation, along-track separation
  double signal = kReferenceSignal;

  /// Solver defaults calibrated for counts-scale images (see README).
  static Scenario defaults();
};

SystemParams sample_parameters(const ParameterSpec& spec, std::uint64_t rng_seed,
                               const SystemParams& base = {});

struct TrialResult {
  SystemParams params;
  std::optional<double> resolution_m;
  std::optional<double> f_cross;
  bool limited_by_ladder = false;
  bool solver_converged = false;
  int iterations = 0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds; not part of any persisted output
  std::string failure;
};

/// target -> simulate -> super-resolve -> measure. Pipeline exceptions are
/// captured in `failure`.
TrialResult run_trial(const SystemParams& params, const Scenario& scenario,
                      std::uint64_t seed);

struct Histogram {
  double bin_width = 0.05;
  long first_bin = 0;  // bin k covers [k w, (k+1) w)
  std::vector<int> counts;

  double lower_edge(std::size_t i) const { return (first_bin + long(i)) * bin_width; }
  double center(std::size_t i) const { return lower_edge(i) + 0.5 * bin_width; }
};

Histogram make_histogram(const std::vector<double>& values, double bin_width);

struct CampaignResult {
  std::vector<TrialResult> trials;
  Histogram histogram;
  std::optional<double> mode_m;
  double mean_m = 0.0;
  double p10_m = 0.0;
  double p90_m = 0.0;
  int resolved = 0;
  int failed = 0;  // pipeline failures
};

using ProgressFn = std::function<void(int done, int total)>;

struct RunOptions {
  int threads = 1;
  ProgressFn progress;
};

/// Trial i samples parameters and runs with seeds derived from
/// (master_seed, i); output does not depend on thread count.
CampaignResult run_campaign(const ParameterSpec& spec, const Scenario& scenario,
                            int n_trials, std::uint64_t master_seed,
                            double bin_width_m = 0.05,
                            const RunOptions& options = {});

struct SweepResult {
  std::string parameter;
  std::vector<double> values;
  std::vector<std::optional<double>> mean_resolution_m;
  std::vector<std::vector<TrialResult>> trials;  // [value][seed]
};

/// One-at-a-time sweep: every value shares the same seeds_per_value seeds.
SweepResult sweep(const std::string& parameter, const std::vector<double>& values,
                  const SystemParams& nominal, const Scenario& scenario,
                  int seeds_per_value, std::uint64_t base_seed,
                  const RunOptions& options = {});

struct GridSweepResult {
  std::string parameter_a;
  std::string parameter_b;
  std::vector<double> values_a;
  std::vector<double> values_b;
  std::vector<std::vector<std::optional<double>>> mean_resolution_m;  // [a][b]
  std::vector<std::vector<std::vector<TrialResult>>> trials;         // [a][b][seed]
};

GridSweepResult sweep_grid(const std::string& parameter_a,
                           const std::vector<double>& values_a,
                           const std::string& parameter_b,
                           const std::vector<double>& values_b,
                           const SystemParams& nominal, const Scenario& scenario,
                           int seeds_per_value, std::uint64_t base_seed,
                           const RunOptions& options = {});

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn,
                  const ProgressFn& progress = {});

}  // namespace srlab
