#include "srlab/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "srlab/config.hpp"
#include "srlab/pgm.hpp"
#include "srlab/report.hpp"

namespace srlab {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string output_dir;
};

struct CommandOptions {
  // simulate / superresolve / measure
  std::string metadata;
  std::string init;
  std::string image;
  std::optional<int> sector;
  std::optional<double> noise_sigma;
  double pitch = 1.0;
  // montecarlo / sweep
  std::optional<int> trials;
  std::string parameter;
  std::vector<double> values;
  std::string parameter_b;
  std::vector<double> values_b;
  std::optional<int> seeds_per_value;
  bool quiet = false;
};

ScenarioConfig load(const GlobalOptions& g) {
  ScenarioConfig c = g.config.empty() ? ScenarioConfig{} : load_config(g.config);
  if (g.seed) c.seed = g.seed;
  if (!g.output_dir.empty()) c.output_dir = g.output_dir;
  return c;
}

std::uint64_t require_seed(const ScenarioConfig& c) {
  if (!c.seed) throw UsageError("no seed: pass --seed or set \"seed\" in the config");
  return *c.seed;
}

fs::path prepare_output(const ScenarioConfig& c) {
  const fs::path dir = c.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
  return dir;
}

ProgressFn progress_to(std::ostream& err, bool quiet, const char* label) {
  if (quiet) return {};
  return [&err, label](int done, int total) {
    const int step = std::max(1, total / 10);
    if (done % step == 0 || done == total) {
      err << label << ": " << done << "/" << total << "\n";
    }
  };
}

void cmd_target(const GlobalOptions& g, std::ostream& err) {
  const ScenarioConfig c = load(g);
  const fs::path dir = prepare_output(c);
  write_pgm(dir / "star.pgm", generate_spoke_target(c.star, c.grid));
  err << "wrote " << (dir / "star.pgm").string() << "\n";
}

void cmd_mtf_curves(const GlobalOptions& g, std::ostream& err) {
  const ScenarioConfig c = load(g);
  const fs::path dir = prepare_output(c);
  write_text(dir / "mtf_curves.csv", mtf_curves_csv(mtf_curves(c.system.mtf_chain())));
  err << "wrote " << (dir / "mtf_curves.csv").string() << "\n";
}

void cmd_simulate(const GlobalOptions& g, std::ostream& err) {
  const ScenarioConfig c = load(g);
  const std::uint64_t seed = require_seed(c);
  const fs::path dir = prepare_output(c);
  const ImageGrid truth = generate_spoke_target(c.star, c.grid);
  const auto [obs1, obs2] = simulate_observations(truth, c.system, seed);
  write_pgm(dir / "truth.pgm", truth);
  write_pgm(dir / "obs1.pgm", obs1.image);
  write_pgm(dir / "obs2.pgm", obs2.image);
  ObservationSet set;
  set.files = {"obs1.pgm", "obs2.pgm"};
  set.shifts_hr = {obs1.shift_hr, obs2.shift_hr};
  set.noise_sigmas = {obs1.noise_sigma, obs2.noise_sigma};
  set.decimation = c.system.decimation;
  set.assumed_psf_sigma = c.system.assumed_psf_sigma;
  set.assumed_psf_radius = c.system.assumed_psf_radius;
  set.seed = seed;
  set.star = c.star;
  set.system = c.system;
  write_text(dir / "observations.json", observation_set_json(set));
  err << "wrote truth.pgm, obs1.pgm, obs2.pgm, observations.json to " << dir.string() << "\n";
}

void cmd_superresolve(const GlobalOptions& g, const CommandOptions& o, std::ostream& err) {
  const ScenarioConfig c = load(g);
  const fs::path metadata = o.metadata.empty() ? fs::path(c.output_dir) / "observations.json"
                                               : fs::path(o.metadata);
  const std::vector<Observation> obs = load_observations(metadata);
  std::optional<ImageGrid> init;
  if (!o.init.empty()) init = read_pgm(o.init);
  SolverConfig solver = c.solver;
  solver.sr_factor = obs.front().decimation;
  const SrResult sr = super_resolve(obs, init, solver);
  const fs::path dir = prepare_output(c);
  write_pgm(dir / "sr.pgm", sr.image);
  write_text(dir / "cost_trace.csv", cost_trace_csv(sr.cost_trace));
  write_text(dir / "sr.json", sr_summary_json(sr));
  err << "super-resolved in " << sr.iterations_run << " iterations"
      << (sr.converged ? " (converged)" : "") << "; wrote sr.pgm to " << dir.string() << "\n";
}

void cmd_measure(const GlobalOptions& g, const CommandOptions& o, std::ostream& err) {
  const ScenarioConfig c = load(g);
  if (o.image.empty()) throw UsageError("measure: --image is required");
  const ImageGrid image = read_pgm(o.image, o.pitch);
  const double sigma = o.noise_sigma.value_or(kReferenceSignal / c.system.snr_at_300);
  // Star geometry in the config is in HR pixels; rescale to the image grid.
  StarSpec star = c.star;
  star.center = {star.center.row / o.pitch, star.center.col / o.pitch};
  star.outer_radius /= o.pitch;
  star.inner_radius /= o.pitch;
  const ResolutionReport r =
      measure_resolution(image, star, star.mean_level(), sigma, o.sector, 8, c.measure);
  const fs::path dir = prepare_output(c);
  write_text(dir / "report.json", resolution_report_json(r));
  write_text(dir / "curve.csv", curve_csv(r));
  err << "resolution " << format_number(*r.resolution_m) << " m"
      << (r.limited_by_ladder ? " (limited by ring ladder)" : "") << "\n";
}

void cmd_montecarlo(const GlobalOptions& g, const CommandOptions& o, std::ostream& err) {
  ScenarioConfig c = load(g);
  if (o.trials) c.montecarlo.n_trials = *o.trials;
  if (c.montecarlo.n_trials < 1) throw UsageError("--trials must be >= 1");
  const std::uint64_t seed = require_seed(c);
  const fs::path dir = prepare_output(c);
  const CampaignResult r =
      run_campaign(c.montecarlo.spec, c.scenario(), c.montecarlo.n_trials, seed,
                   c.montecarlo.bin_width_m,
                   {g.threads, progress_to(err, o.quiet, "montecarlo")});
  write_text(dir / "trials.csv", trials_csv(r.trials));
  write_text(dir / "histogram.csv", histogram_csv(r.histogram));
  write_text(dir / "summary.json", campaign_summary_json(r, c.montecarlo.n_trials, seed));
  err << "mode " << format_number(*r.mode_m) << " m, mean " << format_number(r.mean_m)
      << " m, " << r.failed << " failed\n";
}

void cmd_sweep(const GlobalOptions& g, const CommandOptions& o, std::ostream& err) {
  ScenarioConfig c = load(g);
  SweepConfig s = c.sweep;
  if (!o.parameter.empty()) s.parameter = o.parameter;
  if (!o.values.empty()) s.values = o.values;
  if (!o.parameter_b.empty()) s.parameter_b = o.parameter_b;
  if (!o.values_b.empty()) s.values_b = o.values_b;
  if (o.seeds_per_value) s.seeds_per_value = *o.seeds_per_value;
  if (s.values.size() < 2) throw UsageError("sweep needs at least 2 values");
  const std::uint64_t seed = require_seed(c);
  const fs::path dir = prepare_output(c);
  const RunOptions run{g.threads, progress_to(err, o.quiet, "sweep")};
  try {
    if (s.parameter_b.empty()) {
      const SweepResult r = sweep(s.parameter, s.values, c.system, c.scenario(),
                                  s.seeds_per_value, seed, run);
      write_text(dir / "sweep.csv", sweep_csv(r));
      write_text(dir / "sweep_summary.json", sweep_summary_json(r));
    } else {
      if (s.values_b.size() < 2) throw UsageError("grid sweep needs at least 2 values_b");
      const GridSweepResult r =
          sweep_grid(s.parameter, s.values, s.parameter_b, s.values_b, c.system,
                     c.scenario(), s.seeds_per_value, seed, run);
      write_text(dir / "sweep_grid.csv", grid_sweep_csv(r));
      write_text(dir / "sweep_grid_summary.json", grid_sweep_summary_json(r));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  err << "sweep written to " << dir.string() << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& err) {
  CLI::App app{"Dual-subarray super-resolution simulator and resolution metrology", "srlab"};
  app.require_subcommand(1);
  GlobalOptions g;
  CommandOptions o;
  app.add_option("--config", g.config, "Scenario config (JSON)");
  app.add_option("--seed", g.seed, "Master seed; overrides the config");
  app.add_option("--threads", g.threads, "Worker threads for montecarlo and sweep")
      ->check(CLI::PositiveNumber);
  app.add_option("--output-dir", g.output_dir, "Directory for all outputs");
  app.add_flag("--quiet", o.quiet, "No progress messages");

  auto* target = app.add_subcommand("target", "Write the Siemens star as star.pgm");
  auto* mtf = app.add_subcommand("mtf-curves", "Write component MTF curves");
  auto* simulate = app.add_subcommand("simulate", "Simulate the two subarray images");
  auto* superres = app.add_subcommand("superresolve", "Reconstruct from simulated images");
  superres->add_option("--metadata", o.metadata, "observations.json from simulate");
  superres->add_option("--init", o.init, "Initial HR estimate (PGM)");
  auto* measure = app.add_subcommand("measure", "Measure resolution of a star image");
  measure->add_option("--image", o.image, "Image to measure (PGM)")->required();
  measure->add_option("--sector", o.sector, "Restrict to one of 8 sectors")
      ->check(CLI::Range(0, 7));
  measure->add_option("--noise-sigma", o.noise_sigma, "Noise sigma in counts");
  measure->add_option("--pitch", o.pitch, "HR pixels per image pixel")
      ->check(CLI::PositiveNumber);
  auto* mc = app.add_subcommand("montecarlo", "Run a Monte Carlo campaign");
  mc->add_option("--trials", o.trials, "Number of trials");
  auto* sw = app.add_subcommand("sweep", "One- or two-parameter sensitivity sweep");
  sw->add_option("--parameter", o.parameter, "Parameter to vary");
  sw->add_option("--values", o.values, "Values (comma separated)")->delimiter(',');
  sw->add_option("--parameter-b", o.parameter_b, "Second parameter for a grid sweep");
  sw->add_option("--values-b", o.values_b, "Second-axis values")->delimiter(',');
  sw->add_option("--seeds-per-value", o.seeds_per_value, "Seeds per value");
  for (auto* sub : {target, mtf, simulate, superres, measure, mc, sw}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    err << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (target->parsed()) cmd_target(g, err);
    else if (mtf->parsed()) cmd_mtf_curves(g, err);
    else if (simulate->parsed()) cmd_simulate(g, err);
    else if (superres->parsed()) cmd_superresolve(g, o, err);
    else if (measure->parsed()) cmd_measure(g, o, err);
    else if (mc->parsed()) cmd_montecarlo(g, o, err);
    else if (sw->parsed()) cmd_sweep(g, o, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace srlab
