#include "srlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "srlab/pgm.hpp"

namespace srlab {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string opt(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

ordered opt_json(const std::optional<double>& v) {
  return v ? ordered(*v) : ordered(nullptr);
}

ordered params_json(const SystemParams& p) {
  ordered j;
  j["optics_mtf"] = p.optics_mtf_at_hr_nyq;
  j["clock_phases"] = p.n_phi;
  j["jitter"] = p.jitter_sigma;
  j["snr"] = p.snr_at_300;
  j["subarray_shift"] = p.subarray_shift_ax;
  j["subarray_shift_al_lines"] = p.subarray_shift_al_lines;
  j["assumed_psf_sigma"] = p.assumed_psf_sigma;
  j["assumed_psf_radius"] = p.assumed_psf_radius;
  j["detector_width"] = p.detector_width_w;
  j["smear_f_N"] = p.smear_f_N;
  j["decimation"] = {p.decimation.along, p.decimation.across};
  return j;
}

std::string dump(const ordered& j) { return j.dump(2) + "\n"; }

constexpr const char* kTrialColumns =
    "optics_mtf,clock_phases,jitter,snr,subarray_shift,assumed_psf_sigma,"
    "assumed_psf_radius,resolution_m,f_cross,limited_by_ladder,converged,"
    "iterations,failure";

std::string trial_fields(const TrialResult& t) {
  const SystemParams& p = t.params;
  std::string failure = t.failure;
  for (char& c : failure) {
    if (c == ',' || c == '\n' || c == '"') c = ' ';
  }
  return format_number(p.optics_mtf_at_hr_nyq) + "," + std::to_string(p.n_phi) + "," +
         format_number(p.jitter_sigma) + "," + format_number(p.snr_at_300) + "," +
         format_number(p.subarray_shift_ax) + "," + format_number(p.assumed_psf_sigma) +
         "," + std::to_string(p.assumed_psf_radius) + "," + opt(t.resolution_m) + "," +
         opt(t.f_cross) + "," + (t.limited_by_ladder ? "1" : "0") + "," +
         (t.solver_converged ? "1" : "0") + "," + std::to_string(t.iterations) + "," +
         failure;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string mtf_curves_csv(const std::vector<MtfCurveRow>& rows) {
  std::string s = "f_cyc_per_hr_sample,optics,footprint,sampling,smear,jitter,system\n";
  for (const auto& r : rows) {
    s += format_number(r.f) + "," + format_number(r.optics) + "," +
         format_number(r.footprint) + "," + format_number(r.sampling) + "," +
         format_number(r.smear) + "," + format_number(r.jitter) + "," +
         format_number(r.system) + "\n";
  }
  return s;
}

std::string cost_trace_csv(const std::vector<double>& trace) {
  std::string s = "iteration,cost\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    s += std::to_string(i) + "," + format_number(trace[i]) + "\n";
  }
  return s;
}

std::string curve_csv(const ResolutionReport& report) {
  std::string s = "f,M,nem\n";
  for (const auto& p : report.curve) {
    s += format_number(p.f) + "," + format_number(p.M) + "," + format_number(report.nem) + "\n";
  }
  return s;
}

std::string trials_csv(const std::vector<TrialResult>& trials) {
  std::string s = std::string("trial,seed,") + kTrialColumns + "\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    s += std::to_string(i) + "," + std::to_string(trials[i].seed) + "," +
         trial_fields(trials[i]) + "\n";
  }
  return s;
}

std::string histogram_csv(const Histogram& h) {
  std::string s = "bin_low_m,bin_high_m,bin_center_m,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    s += format_number(h.lower_edge(i)) + "," + format_number(h.lower_edge(i + 1)) + "," +
         format_number(h.center(i)) + "," + std::to_string(h.counts[i]) + "\n";
  }
  return s;
}

std::string sweep_csv(const SweepResult& r) {
  std::string s = std::string("parameter,value,seed_index,seed,") + kTrialColumns + "\n";
  for (std::size_t v = 0; v < r.values.size(); ++v) {
    for (std::size_t k = 0; k < r.trials[v].size(); ++k) {
      const auto& t = r.trials[v][k];
      s += r.parameter + "," + format_number(r.values[v]) + "," + std::to_string(k) + "," +
           std::to_string(t.seed) + "," + trial_fields(t) + "\n";
    }
  }
  return s;
}

std::string grid_sweep_csv(const GridSweepResult& r) {
  std::string s = "parameter_a,value_a,parameter_b,value_b,seed_index,seed," +
                  std::string(kTrialColumns) + "\n";
  for (std::size_t a = 0; a < r.values_a.size(); ++a) {
    for (std::size_t b = 0; b < r.values_b.size(); ++b) {
      for (std::size_t k = 0; k < r.trials[a][b].size(); ++k) {
        const auto& t = r.trials[a][b][k];
        s += r.parameter_a + "," + format_number(r.values_a[a]) + "," + r.parameter_b + "," +
             format_number(r.values_b[b]) + "," + std::to_string(k) + "," +
             std::to_string(t.seed) + "," + trial_fields(t) + "\n";
      }
    }
  }
  return s;
}

std::string resolution_report_json(const ResolutionReport& r) {
  ordered j;
  j["nem"] = r.nem;
  j["f_cross"] = opt_json(r.f_cross);
  j["resolution_m"] = opt_json(r.resolution_m);
  j["sector"] = r.sector ? ordered(*r.sector) : ordered(nullptr);
  j["degenerate"] = r.degenerate;
  j["limited_by_ladder"] = r.limited_by_ladder;
  j["dropped_rings"] = r.dropped_rings;
  ordered curve = ordered::array();
  for (const auto& p : r.curve) curve.push_back({{"f", p.f}, {"M", p.M}});
  j["curve"] = curve;
  return dump(j);
}

std::string campaign_summary_json(const CampaignResult& r, int n_trials,
                                  std::uint64_t master_seed) {
  ordered j;
  j["n_trials"] = n_trials;
  j["master_seed"] = master_seed;
  j["resolved"] = r.resolved;
  j["failed"] = r.failed;
  j["mode_m"] = opt_json(r.mode_m);
  j["mean_m"] = r.mean_m;
  j["p10_m"] = r.p10_m;
  j["p90_m"] = r.p90_m;
  j["bin_width_m"] = r.histogram.bin_width;
  int limited = 0;
  for (const auto& t : r.trials) limited += t.limited_by_ladder ? 1 : 0;
  j["limited_by_ladder"] = limited;
  return dump(j);
}

std::string sweep_summary_json(const SweepResult& r) {
  ordered j;
  j["parameter"] = r.parameter;
  j["values"] = r.values;
  ordered means = ordered::array();
  for (const auto& m : r.mean_resolution_m) means.push_back(opt_json(m));
  j["mean_resolution_m"] = means;
  j["seeds_per_value"] = r.trials.empty() ? 0 : r.trials.front().size();
  return dump(j);
}

std::string grid_sweep_summary_json(const GridSweepResult& r) {
  ordered j;
  j["parameter_a"] = r.parameter_a;
  j["values_a"] = r.values_a;
  j["parameter_b"] = r.parameter_b;
  j["values_b"] = r.values_b;
  ordered grid = ordered::array();
  for (const auto& row : r.mean_resolution_m) {
    ordered line = ordered::array();
    for (const auto& m : row) line.push_back(opt_json(m));
    grid.push_back(line);
  }
  j["mean_resolution_m"] = grid;
  return dump(j);
}

std::string sr_summary_json(const SrResult& r) {
  ordered j;
  j["iterations_run"] = r.iterations_run;
  j["converged"] = r.converged;
  j["initial_cost"] = r.cost_trace.empty() ? ordered(nullptr) : ordered(r.cost_trace.front());
  j["final_cost"] = r.cost_trace.empty() ? ordered(nullptr) : ordered(r.cost_trace.back());
  j["height"] = r.image.height();
  j["width"] = r.image.width();
  return dump(j);
}

std::string observation_set_json(const ObservationSet& set) {
  ordered j;
  ordered obs = ordered::array();
  for (std::size_t i = 0; i < set.files.size(); ++i) {
    obs.push_back({{"file", set.files[i]},
                   {"shift_hr", {set.shifts_hr[i].row, set.shifts_hr[i].col}},
                   {"noise_sigma", set.noise_sigmas[i]}});
  }
  j["observations"] = obs;
  j["decimation"] = {set.decimation.along, set.decimation.across};
  j["assumed_psf"] = {{"sigma", set.assumed_psf_sigma}, {"radius", set.assumed_psf_radius}};
  j["seed"] = set.seed;
  j["star"] = {{"cycles", set.star.cycles},
               {"outer_radius", set.star.outer_radius},
               {"inner_radius", set.star.inner_radius},
               {"dark_level", set.star.dark_level},
               {"bright_level", set.star.bright_level},
               {"center", {set.star.center.row, set.star.center.col}},
               {"supersample", set.star.supersample}};
  j["system"] = params_json(set.system);
  return dump(j);
}

ObservationSet parse_observation_set(const std::string& json_text) {
  ObservationSet set;
  try {
    const json j = json::parse(json_text);
    for (const auto& o : j.at("observations")) {
      set.files.push_back(o.at("file").get<std::string>());
      const auto s = o.at("shift_hr").get<std::vector<double>>();
      if (s.size() != 2) throw std::runtime_error("shift_hr needs 2 values");
      set.shifts_hr.push_back({s[0], s[1]});
      set.noise_sigmas.push_back(o.at("noise_sigma").get<double>());
    }
    const auto d = j.at("decimation").get<std::vector<int>>();
    if (d.size() != 2) throw std::runtime_error("decimation needs 2 values");
    set.decimation = {d[0], d[1]};
    set.assumed_psf_sigma = j.at("assumed_psf").at("sigma").get<double>();
    set.assumed_psf_radius = j.at("assumed_psf").at("radius").get<int>();
    set.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("star")) {
      const auto& s = j["star"];
      set.star.cycles = s.at("cycles").get<int>();
      set.star.outer_radius = s.at("outer_radius").get<double>();
      set.star.inner_radius = s.at("inner_radius").get<double>();
      set.star.dark_level = s.at("dark_level").get<double>();
      set.star.bright_level = s.at("bright_level").get<double>();
      const auto c = s.at("center").get<std::vector<double>>();
      if (c.size() != 2) throw std::runtime_error("center needs 2 values");
      set.star.center = {c[0], c[1]};
      set.star.supersample = s.at("supersample").get<int>();
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed observation metadata: ") + e.what());
  }
  if (set.files.empty()) throw std::runtime_error("observation metadata lists no files");
  return set;
}

std::vector<Observation> load_observations(const std::filesystem::path& sidecar) {
  const ObservationSet set = parse_observation_set(read_text(sidecar));
  const auto dir = sidecar.parent_path();
  const PsfKernel psf = gaussian_psf(set.assumed_psf_sigma, set.assumed_psf_radius);
  std::vector<Observation> out;
  for (std::size_t i = 0; i < set.files.size(); ++i) {
    Observation o{read_pgm(dir / set.files[i]), set.shifts_hr[i], set.decimation, psf,
                  set.noise_sigmas[i]};
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace srlab
