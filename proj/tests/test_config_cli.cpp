#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srlab/cli.hpp"
#include "srlab/config.hpp"
#include "srlab/pgm.hpp"
#include "srlab/report.hpp"

using namespace srlab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("srlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "srlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), err);
  if (err_text) *err_text = err.str();
  return rc;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char ch : s) n += ch == '\n' ? 1 : 0;
  return n;
}

}  // namespace

TEST(Config, DefaultsParseFromEmptyObject) {
  const ScenarioConfig c = parse_config("{}");
  EXPECT_EQ(c.system, SystemParams{});
  EXPECT_FALSE(c.seed);
  EXPECT_EQ(c.montecarlo.n_trials, 200);
  EXPECT_EQ(c.solver.sr_factor, c.system.decimation);
}

TEST(Config, StrictRejections) {
  EXPECT_THROW(parse_config("{\"sytem\": {}}"), ConfigError);
  EXPECT_THROW(parse_config("{\"system\": {\"snr\": \"high\"}}"), ConfigError);
  EXPECT_THROW(parse_config("{\"system\": {\"snr\": -3}}"), ConfigError);
  EXPECT_THROW(parse_config("{\"solver\": {\"lambda\": 1, \"lamda\": 2}}"), ConfigError);
  EXPECT_THROW(parse_config("{\"montecarlo\": {\"parameters\": {\"focus\": {}}}}"), ConfigError);
  EXPECT_THROW(parse_config("{\"sweep\": {\"parameter\": \"focus\"}}"), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_config("{"), ConfigError);
}

TEST(Config, OverridesApply) {
  const ScenarioConfig c = parse_config(
      R"({"seed": 9, "system": {"snr": 100, "clock_phases": 4},
          "solver": {"lambda": 0.5},
          "montecarlo": {"n_trials": 12,
                         "parameters": {"snr": {"nominal": 60, "low": 50, "high": 70,
                                                "distribution": "uniform_continuous"}}}})");
  EXPECT_EQ(*c.seed, 9u);
  EXPECT_EQ(c.system.snr_at_300, 100.0);
  EXPECT_EQ(c.system.n_phi, 4);
  EXPECT_EQ(c.solver.lambda, 0.5);
  EXPECT_EQ(c.montecarlo.n_trials, 12);
  EXPECT_EQ(c.montecarlo.spec.find("snr").distribution, Distribution::kUniformContinuous);
  EXPECT_EQ(c.montecarlo.spec.find("snr").low, 50.0);
  // Untouched parameters keep their defaults.
  EXPECT_EQ(c.montecarlo.spec.find("jitter").high, 0.2);
}

TEST(Config, DumpParseRoundTrip) {
  ScenarioConfig c = parse_config(R"({"seed": 5, "system": {"jitter": 0.17}, "output_dir": "x"})");
  c.sweep.parameter_b = "snr";
  c.sweep.values_b = {30, 100};
  const std::string text = dump_config(c);
  const ScenarioConfig back = parse_config(text);
  EXPECT_EQ(dump_config(back), text);
  EXPECT_EQ(back.system, c.system);
  EXPECT_EQ(*back.seed, 5u);
  EXPECT_EQ(back.output_dir, "x");
}

TEST(Cli, TargetWritesStar) {
  const fs::path dir = fresh_dir("target");
  ASSERT_EQ(cli({"--output-dir", dir.string(), "target"}), kExitOk);
  const ImageGrid star = read_pgm(dir / "star.pgm");
  EXPECT_EQ(star.height(), 256);
  EXPECT_EQ(star.width(), 256);
}

TEST(Cli, MtfCurvesWrites512Rows) {
  const fs::path dir = fresh_dir("mtf");
  ASSERT_EQ(cli({"--output-dir", dir.string(), "mtf-curves"}), kExitOk);
  const std::string csv = read_text(dir / "mtf_curves.csv");
  EXPECT_EQ(csv.rfind("f_cyc_per_hr_sample,", 0), 0u);
  EXPECT_EQ(count_lines(csv), 513);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = fresh_dir("codes");
  std::string err;
  EXPECT_EQ(cli({"--output-dir", dir.string(), "simulate"}, &err), kExitUsage);
  EXPECT_NE(err.find("seed"), std::string::npos);
  EXPECT_EQ(cli({"frobnicate"}), kExitUsage);
  EXPECT_EQ(cli({}), kExitUsage);
  EXPECT_EQ(cli({"--output-dir", dir.string(), "measure", "--image",
                 (dir / "missing.pgm").string()}, &err),
            kExitFailure);
  EXPECT_FALSE(err.empty());
  EXPECT_EQ(cli({"--config", (dir / "missing.json").string(), "target"}), kExitFailure);
  EXPECT_EQ(cli({"--output-dir", dir.string(), "--seed", "1", "sweep", "--parameter", "focus"}),
            kExitUsage);
}

TEST(Cli, BadConfigIsAFailure) {
  const fs::path dir = fresh_dir("badcfg");
  write_text(dir / "c.json", "{\"bogus\": 1}");
  std::string err;
  EXPECT_EQ(cli({"--config", (dir / "c.json").string(), "target"}, &err), kExitFailure);
  EXPECT_NE(err.find("bogus"), std::string::npos);
}

TEST(Cli, SimulateSuperresolveMeasurePipeline) {
  const fs::path dir = fresh_dir("pipeline");
  const std::string out = dir.string();
  ASSERT_EQ(cli({"--output-dir", out, "--seed", "3", "--quiet", "simulate"}), kExitOk);
  for (const char* f : {"truth.pgm", "obs1.pgm", "obs2.pgm", "observations.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(read_pgm(dir / "obs1.pgm").width(), 128);
  const auto obs = load_observations(dir / "observations.json");
  ASSERT_EQ(obs.size(), 2u);
  EXPECT_EQ(obs[1].shift_hr, (Point2{20.0, 1.0}));

  ASSERT_EQ(cli({"--output-dir", out, "--seed", "3", "--quiet", "superresolve"}), kExitOk);
  const ImageGrid sr = read_pgm(dir / "sr.pgm");
  EXPECT_EQ(sr.width(), 256);
  const auto summary = nlohmann::json::parse(read_text(dir / "sr.json"));
  EXPECT_GT(summary.at("iterations_run").get<int>(), 0);
  EXPECT_EQ(count_lines(read_text(dir / "cost_trace.csv")),
            summary.at("iterations_run").get<int>() + 2);

  ASSERT_EQ(cli({"--output-dir", out, "--quiet", "measure", "--image", (dir / "sr.pgm").string(),
                 "--noise-sigma", "5"}),
            kExitOk);
  const auto report = nlohmann::json::parse(read_text(dir / "report.json"));
  const double res = report.at("resolution_m").get<double>();
  EXPECT_GT(res, 1.2);
  EXPECT_LT(res, 2.2);
  EXPECT_TRUE(fs::exists(dir / "curve.csv"));
}

TEST(Cli, MontecarloIsByteReproducible) {
  const fs::path a = fresh_dir("mc_a");
  const fs::path b = fresh_dir("mc_b");
  ASSERT_EQ(cli({"--output-dir", a.string(), "--seed", "17", "--threads", "1", "--quiet",
                 "montecarlo", "--trials", "3"}),
            kExitOk);
  ASSERT_EQ(cli({"--output-dir", b.string(), "--seed", "17", "--threads", "2", "--quiet",
                 "montecarlo", "--trials", "3"}),
            kExitOk);
  for (const char* f : {"trials.csv", "histogram.csv", "summary.json"}) {
    EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
  }
  EXPECT_EQ(count_lines(read_text(a / "trials.csv")), 4);
}

TEST(Cli, SweepWritesTable) {
  const fs::path dir = fresh_dir("sweep");
  ASSERT_EQ(cli({"--output-dir", dir.string(), "--seed", "2", "--quiet", "--threads", "2", "sweep",
                 "--parameter", "snr", "--values", "30,100", "--seeds-per-value", "1"}),
            kExitOk);
  const std::string csv = read_text(dir / "sweep.csv");
  EXPECT_GE(count_lines(csv), 3);
  EXPECT_TRUE(fs::exists(dir / "sweep_summary.json"));
}
