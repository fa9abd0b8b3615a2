#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "srlab/metrology.hpp"
#include "srlab/montecarlo.hpp"
#include "srlab/mtf.hpp"
#include "srlab/simulator.hpp"
#include "srlab/solver.hpp"
#include "srlab/target.hpp"

namespace srlab {

/// Shortest round-trip decimal ("%.17g").
std::string format_number(double v);

/// Writes `text` as-is (binary mode, so LF stays LF). Creates parent
/// directories; throws std::runtime_error naming the file on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// CSV tables: header row, comma separated, LF line endings.
std::string mtf_curves_csv(const std::vector<MtfCurveRow>& rows);
std::string cost_trace_csv(const std::vector<double>& trace);
std::string curve_csv(const ResolutionReport& report);
std::string trials_csv(const std::vector<TrialResult>& trials);
std::string histogram_csv(const Histogram& histogram);
std::string sweep_csv(const SweepResult& result);
std::string grid_sweep_csv(const GridSweepResult& result);

// JSON summaries. None of them carry timing, so equal inputs give equal bytes.
std::string resolution_report_json(const ResolutionReport& report);
std::string campaign_summary_json(const CampaignResult& result, int n_trials,
                                  std::uint64_t master_seed);
std::string sweep_summary_json(const SweepResult& result);
std::string grid_sweep_summary_json(const GridSweepResult& result);
std::string sr_summary_json(const SrResult& result);

/// Sidecar written next to simulated observations.
struct ObservationSet {
  std::vector<std::string> files;  // relative to the sidecar
  std::vector<Point2> shifts_hr;
  std::vector<double> noise_sigmas;
  Factor2 decimation{1, 2};
  double assumed_psf_sigma = 0.5;
  int assumed_psf_radius = 2;
  std::uint64_t seed = 0;
  StarSpec star{};
  SystemParams system{};
};

std::string observation_set_json(const ObservationSet& set);
ObservationSet parse_observation_set(const std::string& json_text);

/// Reads the sidecar and the PGMs it lists.
std::vector<Observation> load_observations(const std::filesystem::path& sidecar);

}  // namespace srlab
