#include "srlab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

#include "srlab/seeding.hpp"

namespace srlab {

const char* to_string(Distribution d) {
  switch (d) {
    case Distribution::kGaussianTruncated: return "gaussian_truncated";
    case Distribution::kUniformContinuous: return "uniform_continuous";
    case Distribution::kUniformDiscrete: return "uniform_discrete";
  }
  return "unknown";
}

Distribution distribution_from_string(const std::string& name) {
  if (name == "gaussian_truncated") return Distribution::kGaussianTruncated;
  if (name == "uniform_continuous") return Distribution::kUniformContinuous;
  if (name == "uniform_discrete") return Distribution::kUniformDiscrete;
  throw std::invalid_argument("unknown distribution: " + name);
}

void ParameterDist::validate() const {
  if (distribution == Distribution::kUniformDiscrete) {
    if (discrete_values.empty()) {
      throw std::invalid_argument(name + ": discrete_values is empty");
    }
    return;
  }
  if (!(low <= high) || !std::isfinite(low) || !std::isfinite(high)) {
    throw std::invalid_argument(name + ": need low <= high");
  }
  if (!(nominal >= low && nominal <= high)) {
    throw std::invalid_argument(name + ": nominal outside [low, high]");
  }
}

double ParameterDist::draw(std::mt19937_64& rng) const {
  switch (distribution) {
    case Distribution::kUniformDiscrete: {
      std::uniform_int_distribution<std::size_t> pick(0, discrete_values.size() - 1);
      return discrete_values[pick(rng)];
    }
    case Distribution::kUniformContinuous: {
      if (low == high) return low;
      std::uniform_real_distribution<double> u(low, high);
      return u(rng);
    }
    case Distribution::kGaussianTruncated: {
      const double sigma = (high - low) / 6.0;
      if (sigma == 0.0) return nominal;
      std::normal_distribution<double> g(nominal, sigma);
      // Acceptance is at least ~50% since nominal lies inside the range.
      for (int i = 0; i < 10000; ++i) {
        const double v = g(rng);
        if (v >= low && v <= high) return v;
      }
      return nominal;
    }
  }
  return nominal;
}

void set_parameter(SystemParams& p, const std::string& name, double value) {
  if (name == "optics_mtf") {
    p.optics_mtf_at_hr_nyq = value;
  } else if (name == "clock_phases") {
    p.n_phi = static_cast<int>(std::lround(value));
  } else if (name == "jitter") {
    p.jitter_sigma = value;
  } else if (name == "snr") {
    p.snr_at_300 = value;
  } else if (name == "subarray_shift") {
    p.subarray_shift_ax = value;
  } else if (name == "assumed_psf_sigma") {
    p.assumed_psf_sigma = value;
  } else if (name == "assumed_psf_radius") {
    p.assumed_psf_radius = static_cast<int>(std::lround(value));
  } else {
    throw std::invalid_argument("unknown parameter: " + name);
  }
}

double get_parameter(const SystemParams& p, const std::string& name) {
  if (name == "optics_mtf") return p.optics_mtf_at_hr_nyq;
  if (name == "clock_phases") return p.n_phi;
  if (name == "jitter") return p.jitter_sigma;
  if (name == "snr") return p.snr_at_300;
  if (name == "subarray_shift") return p.subarray_shift_ax;
  if (name == "assumed_psf_sigma") return p.assumed_psf_sigma;
  if (name == "assumed_psf_radius") return p.assumed_psf_radius;
  throw std::invalid_argument("unknown parameter: " + name);
}

ParameterSpec ParameterSpec::defaults() {
  using D = Distribution;
  ParameterSpec s;
  s.parameters = {
      {"optics_mtf", 0.30, 0.10, 0.50, D::kGaussianTruncated, {}},
      {"clock_phases", 1.0, 1.0, 4.0, D::kUniformDiscrete, {1.0, 2.0, 4.0}},
      {"jitter", 0.10, 0.10, 0.20, D::kGaussianTruncated, {}},
      {"snr", 60.0, 30.0, 100.0, D::kGaussianTruncated, {}},
      {"subarray_shift", 0.50, 0.10, 0.50, D::kUniformContinuous, {}},
      {"assumed_psf_sigma", 0.50, 0.50, 1.00, D::kUniformContinuous, {}},
      {"assumed_psf_radius", 2.0, 2.0, 3.0, D::kUniformDiscrete, {2.0, 3.0}},
  };
  return s;
}

const ParameterDist& ParameterSpec::find(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown parameter: " + name);
}

ParameterDist& ParameterSpec::find(const std::string& name) {
  return const_cast<ParameterDist&>(std::as_const(*this).find(name));
}

SystemParams ParameterSpec::nominal(const SystemParams& base) const {
  SystemParams p = base;
  for (const auto& d : parameters) set_parameter(p, d.name, d.nominal);
  return p;
}

void ParameterSpec::validate() const {
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    parameters[i].validate();
    SystemParams probe;
    set_parameter(probe, parameters[i].name, parameters[i].nominal);
    for (std::size_t j = 0; j < i; ++j) {
      if (parameters[j].name == parameters[i].name) {
        throw std::invalid_argument("duplicate parameter: " + parameters[i].name);
      }
    }
  }
}

Scenario Scenario::defaults() { return Scenario{}; }

SystemParams sample_parameters(const ParameterSpec& spec, std::uint64_t rng_seed,
                               const SystemParams& base) {
  spec.validate();
  std::mt19937_64 rng(rng_seed);
  SystemParams p = base;
  for (const auto& d : spec.parameters) set_parameter(p, d.name, d.draw(rng));
  return p;
}

TrialResult run_trial(const SystemParams& params, const Scenario& scenario,
                      std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialResult out;
  out.params = params;
  out.seed = seed;
  try {
    const ImageGrid target = generate_spoke_target(scenario.star, scenario.grid);
    auto [obs1, obs2] = simulate_observations(target, params, derive_seed(seed, 0));
    const Observation observations[] = {std::move(obs1), std::move(obs2)};
    SolverConfig solver = scenario.solver;
    solver.sr_factor = params.decimation;
    const SrResult sr = super_resolve(observations, std::nullopt, solver);
    out.solver_converged = sr.converged;
    out.iterations = sr.iterations_run;
    const ResolutionReport report = measure_resolution(
        sr.image, scenario.star, scenario.signal,
        kReferenceSignal / params.snr_at_300, std::nullopt, 8, scenario.measure);
    out.resolution_m = report.resolution_m;
    out.f_cross = report.f_cross;
    out.limited_by_ladder = report.limited_by_ladder;
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Histogram make_histogram(const std::vector<double>& values, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("histogram: bin_width must be > 0");
  Histogram h;
  h.bin_width = bin_width;
  if (values.empty()) return h;
  std::vector<long> bins;
  bins.reserve(values.size());
  for (double v : values) bins.push_back(static_cast<long>(std::floor(v / bin_width)));
  const auto [lo, hi] = std::minmax_element(bins.begin(), bins.end());
  h.first_bin = *lo;
  h.counts.assign(static_cast<std::size_t>(*hi - *lo + 1), 0);
  for (long b : bins) ++h.counts[static_cast<std::size_t>(b - h.first_bin)];
  return h;
}

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  const std::size_t j = std::min(i + 1, v.size() - 1);
  return v[i] + (pos - i) * (v[j] - v[i]);
}

std::optional<double> mean_resolution(const std::vector<TrialResult>& trials) {
  double sum = 0.0;
  int n = 0;
  for (const auto& t : trials) {
    if (t.resolution_m) {
      sum += *t.resolution_m;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace

void parallel_for(int n, int threads, const std::function<void(int)>& fn,
                  const ProgressFn& progress) {
  if (n <= 0) return;
  threads = std::clamp(threads, 1, n);
  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mutex;
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
      const int d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(d, n);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

CampaignResult run_campaign(const ParameterSpec& spec, const Scenario& scenario,
                            int n_trials, std::uint64_t master_seed,
                            double bin_width_m, const RunOptions& options) {
  if (n_trials < 1) throw std::invalid_argument("run_campaign: n_trials < 1");
  if (!(bin_width_m > 0.0)) throw std::invalid_argument("run_campaign: bin_width_m must be > 0");
  spec.validate();

  CampaignResult out;
  out.trials.resize(static_cast<std::size_t>(n_trials));
  parallel_for(n_trials, options.threads, [&](int i) {
    const std::uint64_t child = derive_seed(master_seed, static_cast<std::uint64_t>(i));
    const SystemParams params =
        sample_parameters(spec, derive_seed(child, 0), scenario.base);
    out.trials[static_cast<std::size_t>(i)] =
        run_trial(params, scenario, derive_seed(child, 1));
  }, options.progress);

  std::vector<double> res;
  for (const auto& t : out.trials) {
    if (t.resolution_m) {
      res.push_back(*t.resolution_m);
    } else {
      ++out.failed;
    }
  }
  out.resolved = static_cast<int>(res.size());
  if (res.empty()) {
    std::string log = "run_campaign: every trial failed";
    for (std::size_t i = 0; i < out.trials.size() && i < 5; ++i) {
      log += "\n  trial " + std::to_string(i) + ": " + out.trials[i].failure;
    }
    throw std::runtime_error(log);
  }
  out.histogram = make_histogram(res, bin_width_m);
  if (!res.empty()) {
    const auto& c = out.histogram.counts;
    // First maximal bin wins ties.
    const std::size_t k = static_cast<std::size_t>(
        std::max_element(c.begin(), c.end()) - c.begin());
    out.mode_m = out.histogram.center(k);
    double sum = 0.0;
    for (double v : res) sum += v;
    out.mean_m = sum / res.size();
    out.p10_m = quantile(res, 0.10);
    out.p90_m = quantile(res, 0.90);
  }
  return out;
}

SweepResult sweep(const std::string& parameter, const std::vector<double>& values,
                  const SystemParams& nominal, const Scenario& scenario,
                  int seeds_per_value, std::uint64_t base_seed,
                  const RunOptions& options) {
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  if (seeds_per_value < 1) throw std::invalid_argument("sweep: seeds_per_value < 1");
  SystemParams probe = nominal;
  set_parameter(probe, parameter, values.front());

  SweepResult out;
  out.parameter = parameter;
  out.values = values;
  const int nv = static_cast<int>(values.size());
  out.trials.assign(values.size(), std::vector<TrialResult>(static_cast<std::size_t>(seeds_per_value)));
  parallel_for(nv * seeds_per_value, options.threads, [&](int k) {
    const int v = k / seeds_per_value;
    const int s = k % seeds_per_value;
    SystemParams p = nominal;
    set_parameter(p, parameter, values[static_cast<std::size_t>(v)]);
    // Common random numbers: seed depends on s only.
    out.trials[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)] =
        run_trial(p, scenario, derive_seed(base_seed, static_cast<std::uint64_t>(s)));
  }, options.progress);
  for (const auto& t : out.trials) out.mean_resolution_m.push_back(mean_resolution(t));
  return out;
}

GridSweepResult sweep_grid(const std::string& parameter_a,
                           const std::vector<double>& values_a,
                           const std::string& parameter_b,
                           const std::vector<double>& values_b,
                           const SystemParams& nominal, const Scenario& scenario,
                           int seeds_per_value, std::uint64_t base_seed,
                           const RunOptions& options) {
  if (values_a.empty() || values_b.empty()) throw std::invalid_argument("sweep_grid: no values");
  if (seeds_per_value < 1) throw std::invalid_argument("sweep_grid: seeds_per_value < 1");
  SystemParams probe = nominal;
  set_parameter(probe, parameter_a, values_a.front());
  set_parameter(probe, parameter_b, values_b.front());

  GridSweepResult out;
  out.parameter_a = parameter_a;
  out.parameter_b = parameter_b;
  out.values_a = values_a;
  out.values_b = values_b;
  const std::size_t na = values_a.size();
  const std::size_t nb = values_b.size();
  const std::size_t ns = static_cast<std::size_t>(seeds_per_value);
  out.trials.assign(na, std::vector<std::vector<TrialResult>>(nb, std::vector<TrialResult>(ns)));
  parallel_for(static_cast<int>(na * nb * ns), options.threads, [&](int k) {
    const std::size_t s = static_cast<std::size_t>(k) % ns;
    const std::size_t b = (static_cast<std::size_t>(k) / ns) % nb;
    const std::size_t a = static_cast<std::size_t>(k) / (ns * nb);
    SystemParams p = nominal;
    set_parameter(p, parameter_a, values_a[a]);
    set_parameter(p, parameter_b, values_b[b]);
    out.trials[a][b][s] = run_trial(p, scenario, derive_seed(base_seed, s));
  }, options.progress);
  out.mean_resolution_m.assign(na, std::vector<std::optional<double>>(nb));
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      out.mean_resolution_m[a][b] = mean_resolution(out.trials[a][b]);
    }
  }
  return out;
}

}  // namespace srlab
