// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "srlab/fft.hpp"
#include "srlab/metrology.hpp"
#include "srlab/montecarlo.hpp"
#include "srlab/mtf.hpp"
#include "srlab/report.hpp"
#include "srlab/simulator.hpp"
#include "srlab/solver.hpp"
#include "srlab/target.hpp"

using namespace srlab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kMasterSeed = 42;
constexpr int kSeeds = 5;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int worker_count() { return std::max(2u, std::thread::hardware_concurrency()); }

ImageGrid random_image(int h, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ImageGrid g(h, w);
  for (double& v : g.data()) v = u(rng);
  return g;
}

Outcome criterion_mtf_anchors() {
  Outcome o;
  const double s25 = smear_mtf(0.25, 0.5, 1);
  const double s50 = smear_mtf(0.5, 0.5, 1);
  const double j = jitter_mtf(0.5, 0.1);
  o.check(std::abs(s25 - 0.900) <= 0.005, "smear(0.25)=" + fmt(s25));
  o.check(std::abs(s50 - 0.637) <= 0.005, "smear(0.5)=" + fmt(s50));
  o.check(std::abs(j - 0.952) <= 0.005, "jitter(0.5,0.1)=" + fmt(j));
  return o;
}

Outcome criterion_nem() {
  Outcome o;
  const double v = nem(300.0, 5.0);
  o.check(std::abs(v - 0.0667) <= 1e-4, "nem(300,5)=" + fmt(v, 5));
  return o;
}

Outcome criterion_metrology() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  StarSpec star;
  star.center = {256, 256};
  star.outer_radius = 240;
  star.cycles = 72;
  const ImageGrid ideal = generate_spoke_target(star, {512, 512});
  fft::Spectrum s = fft::forward(ideal);
  for (int r = 0; r < s.rows; ++r) {
    for (int c = 0; c < s.cols; ++c) {
      const double f2 = std::pow(fft::bin_frequency(r, s.rows), 2) +
                        std::pow(fft::bin_frequency(c, s.cols), 2);
      s.at(r, c) *= std::exp(-2.0 * kPi * kPi * f2);
    }
  }
  const ImageGrid blurred = fft::inverse_real(std::move(s));
  double worst = 0.0, f_lo = 1.0, f_hi = 0.0;
  int rings = 0;
  for (double radius : radius_ladder(star)) {
    const RingFit fi = ring_modulation(ideal, star.center, radius, star.cycles);
    if (fi.f < 0.05 || fi.f > 0.35) continue;
    const RingFit fb = ring_modulation(blurred, star.center, radius, star.cycles);
    const double expected = std::exp(-2.0 * kPi * kPi * fi.f * fi.f) * fi.M;
    worst = std::max(worst, std::abs(fb.M - expected));
    f_lo = std::min(f_lo, fi.f);
    f_hi = std::max(f_hi, fi.f);
    ++rings;
  }
  const double secs = seconds_since(t0);
  o.check(rings >= 10 && f_lo < 0.07 && f_hi > 0.33,
          std::to_string(rings) + " rings over f " + fmt(f_lo, 3) + ".." + fmt(f_hi, 3));
  o.check(worst <= 0.05, "max |dM|=" + fmt(worst));
  o.check(secs < 10.0, "time " + fmt(secs, 2) + " s");
  return o;
}

Observation make_obs(GridSize lr, Point2 shift, Factor2 dec, PsfKernel psf) {
  return Observation{ImageGrid(lr.height, lr.width), shift, dec, std::move(psf), 0.0};
}

bool non_increasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1]) return false;
  }
  return !trace.empty();
}

Outcome criterion_solver() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();

  // Adjoint dot-product identity on random geometries.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> dec(1, 3);
  std::uniform_real_distribution<double> sig(0.3, 1.5);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Factor2 d{dec(rng), dec(rng)};
    const GridSize lr{6 + trial % 5, 7 + trial % 4};
    const Observation obs = make_obs(lr, {u(rng), u(rng)}, d, gaussian_psf(sig(rng), 2));
    const ImageGrid x = random_image(lr.height * d.along, lr.width * d.across, 100 + trial);
    const ImageGrid y = random_image(lr.height, lr.width, 200 + trial);
    const double lhs = dot(forward_model(x, obs), y);
    const double rhs = dot(x, adjoint_model(y, obs));
    worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0));
  }
  o.check(worst_rel <= 1e-8, "adjoint 50 cases, worst rel " + fmt(worst_rel * 1e12, 3) + "e-12");

  // Noiseless two-view scene.
  StarSpec star;
  star.center = {64, 64};
  star.outer_radius = 52;
  star.inner_radius = 4;
  star.cycles = 48;
  const ImageGrid truth = generate_spoke_target(star, {128, 128});
  std::vector<Observation> pair;
  for (Point2 shift : {Point2{0, 0}, Point2{0, 1.0}}) {
    Observation obs = make_obs({128, 64}, shift, {1, 2}, gaussian_psf(1.0));
    obs.image = forward_model(truth, obs);
    pair.push_back(std::move(obs));
  }

  // Cost traces: noiseless pair over several lambdas, plus simulated noisy scenes.
  int traces = 0, monotone = 0;
  for (double lambda : {0.0, 1e-4, 3.0, 50.0}) {
    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.max_iters = 60;
    ++traces;
    monotone += non_increasing(super_resolve(pair, std::nullopt, cfg).cost_trace) ? 1 : 0;
  }
  const StarSpec nominal_star;
  const ImageGrid target = generate_spoke_target(nominal_star, {256, 256});
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto [o1, o2] = simulate_observations(target, SystemParams{}, seed);
    const std::vector<Observation> obs{o1, o2};
    ++traces;
    monotone += non_increasing(super_resolve(obs, std::nullopt, SolverConfig{}).cost_trace) ? 1 : 0;
  }
  o.check(monotone == traces,
          std::to_string(monotone) + "/" + std::to_string(traces) + " cost traces non-increasing");

  SolverConfig cfg;
  cfg.lambda = 1e-4;
  const double sr_err = relative_l2_error(super_resolve(pair, std::nullopt, cfg).image, truth);
  const double bic_err = relative_l2_error(bicubic_upsample(pair.front()), truth);
  o.check(sr_err < 0.6 * bic_err, "SR/bicubic L2 error ratio " + fmt(sr_err / bic_err, 3));

  const double secs = seconds_since(t0);
  o.check(secs < 60.0, "time " + fmt(secs, 1) + " s");
  return o;
}

struct HeadlineRuns {
  double nominal_mean = 0.0;
  std::vector<double> nominal;
  CampaignResult campaign;
  std::string trials_csv_a, trials_csv_b, hist_csv_a, hist_csv_b;
  int threads_a = 1, threads_b = 1;
  double seconds = 0.0;
};

HeadlineRuns headline_runs() {
  HeadlineRuns h;
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario sc = Scenario::defaults();
  const ParameterSpec spec = ParameterSpec::defaults();
  const SweepResult nominal =
      sweep("snr", {spec.find("snr").nominal}, spec.nominal(sc.base), sc, kSeeds, kMasterSeed,
            {worker_count(), {}});
  double sum = 0.0;
  for (const TrialResult& t : nominal.trials.front()) {
    if (t.resolution_m) {
      h.nominal.push_back(*t.resolution_m);
      sum += *t.resolution_m;
    }
  }
  h.nominal_mean = h.nominal.empty() ? 0.0 : sum / h.nominal.size();

  h.threads_a = worker_count();
  h.threads_b = 1;
  h.campaign = run_campaign(spec, sc, 200, kMasterSeed, 0.05, {h.threads_a, {}});
  h.trials_csv_a = trials_csv(h.campaign.trials);
  h.hist_csv_a = histogram_csv(h.campaign.histogram);
  const CampaignResult again = run_campaign(spec, sc, 200, kMasterSeed, 0.05, {h.threads_b, {}});
  h.trials_csv_b = trials_csv(again.trials);
  h.hist_csv_b = histogram_csv(again.histogram);
  h.seconds = seconds_since(t0);
  return h;
}

Outcome criterion_headline(const HeadlineRuns& h) {
  Outcome o;
  std::string values;
  for (double v : h.nominal) values += (values.empty() ? "" : ",") + fmt(v, 3);
  o.check(h.nominal.size() == kSeeds && h.nominal_mean >= 1.5 && h.nominal_mean <= 1.9,
          "nominal mean " + fmt(h.nominal_mean, 3) + " m over {" + values + "}");
  const double mode = h.campaign.mode_m.value_or(0.0);
  o.check(h.campaign.mode_m && mode >= 1.55 && mode <= 1.85,
          "200-trial mode " + fmt(mode, 3) + " m (mean " + fmt(h.campaign.mean_m, 3) + ", p10 " +
              fmt(h.campaign.p10_m, 3) + ", p90 " + fmt(h.campaign.p90_m, 3) + ", failed " +
              std::to_string(h.campaign.failed) + ")");
  o.check(h.seconds < 1800.0, "time " + fmt(h.seconds, 0) + " s");
  return o;
}

std::vector<double> sweep_means(const std::string& parameter, const std::vector<double>& values,
                                std::string& detail) {
  const Scenario sc = Scenario::defaults();
  const SystemParams nominal = ParameterSpec::defaults().nominal(sc.base);
  const SweepResult r =
      sweep(parameter, values, nominal, sc, kSeeds, kMasterSeed, {worker_count(), {}});
  std::vector<double> means;
  detail = parameter + " {";
  for (std::size_t i = 0; i < values.size(); ++i) {
    means.push_back(r.mean_resolution_m[i].value_or(std::nan("")));
    detail += (i ? "," : "") + fmt(means.back(), 3);
  }
  detail += "}";
  return means;
}

Outcome criterion_sweeps() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::string d;

  auto m = sweep_means("optics_mtf", {0.1, 0.3, 0.5}, d);
  o.check(m[1] < m[0] && m[2] < m[1], d + " strictly improving");

  m = sweep_means("snr", {30.0, 60.0, 100.0}, d);
  o.check(m[1] <= m[0] && m[2] <= m[1], d + " non-worsening");

  m = sweep_means("jitter", {0.1, 0.15, 0.2}, d);
  o.check(m[1] >= m[0] && m[2] >= m[1], d + " non-improving");

  m = sweep_means("clock_phases", {1.0, 2.0, 4.0}, d);
  o.check(m[1] <= m[0] && m[2] <= m[1], d + " non-worsening");

  m = sweep_means("subarray_shift", {0.1, 0.2, 0.3, 0.4, 0.5}, d);
  o.check(std::min_element(m.begin(), m.end()) == m.end() - 1, d + " minimized at 0.5");

  const Scenario sc = Scenario::defaults();
  const GridSweepResult g =
      sweep_grid("optics_mtf", {0.1, 0.3, 0.5}, "snr", {30.0, 60.0, 100.0},
                 ParameterSpec::defaults().nominal(sc.base), sc, kSeeds, kMasterSeed,
                 {worker_count(), {}});
  std::size_t best_a = 0, best_b = 0;
  double best = 1e300;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      const double v = g.mean_resolution_m[a][b].value_or(1e300);
      if (v < best) {
        best = v;
        best_a = a;
        best_b = b;
      }
    }
  }
  o.check(best_a == 2 && best_b == 2,
          "MTFxSNR optimum at (" + fmt(g.values_a[best_a], 1) + "," + fmt(g.values_b[best_b], 0) +
              ") = " + fmt(best, 3));

  const double secs = seconds_since(t0);
  o.check(secs < 1200.0, "time " + fmt(secs, 0) + " s");
  return o;
}

Outcome criterion_sr_ratio(const HeadlineRuns& h) {
  Outcome o;
  const double ratio = h.nominal_mean > 0.0 ? 2.5 / h.nominal_mean : 0.0;
  o.check(ratio >= 1.3 && ratio <= 1.65, "2.5 m / " + fmt(h.nominal_mean, 3) + " m = " + fmt(ratio, 3));
  return o;
}

Outcome criterion_determinism(const HeadlineRuns& h) {
  Outcome o;
  o.check(h.trials_csv_a == h.trials_csv_b,
          "trials.csv identical at " + std::to_string(h.threads_a) + " vs " +
              std::to_string(h.threads_b) + " threads");
  o.check(h.hist_csv_a == h.hist_csv_b, "histogram.csv identical");
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "mtf-anchors", criterion_mtf_anchors);
  report(2, "nem", criterion_nem);
  report(3, "metrology-fidelity", criterion_metrology);
  report(4, "solver-correctness", criterion_solver);

  HeadlineRuns h;
  bool have_runs = false;
  std::string run_error;
  try {
    h = headline_runs();
    have_runs = true;
  } catch (const std::exception& e) {
    run_error = e.what();
  }
  auto needs_runs = [&](const std::function<Outcome(const HeadlineRuns&)>& fn) {
    return [&, fn]() {
      if (!have_runs) throw std::runtime_error(run_error);
      return fn(h);
    };
  };
  report(5, "headline-resolution", needs_runs(criterion_headline));
  report(6, "sensitivity-monotonicity", criterion_sweeps);
  report(7, "sr-ratio", needs_runs(criterion_sr_ratio));
  report(8, "determinism", needs_runs(criterion_determinism));

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
