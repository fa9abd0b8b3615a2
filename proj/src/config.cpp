#include "srlab/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

namespace srlab {
namespace {

using nlohmann::json;

// Throws on any key of `obj` not in `allowed`.
void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto k : allowed) known = known || item.key() == k;
    if (!known) {
      throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, std::string_view where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + "." + key + ": wrong type");
  }
}

void read_point(const json& obj, const char* key, Point2& out, std::string_view where) {
  std::vector<double> v{out.row, out.col};
  read(obj, key, v, where);
  if (v.size() != 2) throw ConfigError(std::string(where) + "." + key + ": need [row, col]");
  out = {v[0], v[1]};
}

void read_factor(const json& obj, const char* key, Factor2& out, std::string_view where) {
  std::vector<int> v{out.along, out.across};
  read(obj, key, v, where);
  if (v.size() != 2) throw ConfigError(std::string(where) + "." + key + ": need [along, across]");
  out = {v[0], v[1]};
}

StarSpec star_from(const json& j) {
  check_keys(j, "star", {"cycles", "outer_radius", "inner_radius", "dark_level",
                         "bright_level", "center", "supersample"});
  StarSpec s;
  read(j, "cycles", s.cycles, "star");
  read(j, "outer_radius", s.outer_radius, "star");
  read(j, "inner_radius", s.inner_radius, "star");
  read(j, "dark_level", s.dark_level, "star");
  read(j, "bright_level", s.bright_level, "star");
  read_point(j, "center", s.center, "star");
  read(j, "supersample", s.supersample, "star");
  return s;
}

json to_json(const StarSpec& s) {
  return {{"cycles", s.cycles},           {"outer_radius", s.outer_radius},
          {"inner_radius", s.inner_radius}, {"dark_level", s.dark_level},
          {"bright_level", s.bright_level}, {"center", {s.center.row, s.center.col}},
          {"supersample", s.supersample}};
}

SystemParams system_from(const json& j) {
  check_keys(j, "system", {"optics_mtf", "clock_phases", "jitter", "snr",
                           "subarray_shift", "subarray_shift_al_lines",
                           "assumed_psf_sigma", "assumed_psf_radius",
                           "detector_width", "smear_f_N", "decimation"});
  SystemParams p;
  read(j, "optics_mtf", p.optics_mtf_at_hr_nyq, "system");
  read(j, "clock_phases", p.n_phi, "system");
  read(j, "jitter", p.jitter_sigma, "system");
  read(j, "snr", p.snr_at_300, "system");
  read(j, "subarray_shift", p.subarray_shift_ax, "system");
  read(j, "subarray_shift_al_lines", p.subarray_shift_al_lines, "system");
  read(j, "assumed_psf_sigma", p.assumed_psf_sigma, "system");
  read(j, "assumed_psf_radius", p.assumed_psf_radius, "system");
  read(j, "detector_width", p.detector_width_w, "system");
  read(j, "smear_f_N", p.smear_f_N, "system");
  read_factor(j, "decimation", p.decimation, "system");
  return p;
}

json to_json(const SystemParams& p) {
  return {{"optics_mtf", p.optics_mtf_at_hr_nyq},
          {"clock_phases", p.n_phi},
          {"jitter", p.jitter_sigma},
          {"snr", p.snr_at_300},
          {"subarray_shift", p.subarray_shift_ax},
          {"subarray_shift_al_lines", p.subarray_shift_al_lines},
          {"assumed_psf_sigma", p.assumed_psf_sigma},
          {"assumed_psf_radius", p.assumed_psf_radius},
          {"detector_width", p.detector_width_w},
          {"smear_f_N", p.smear_f_N},
          {"decimation", {p.decimation.along, p.decimation.across}}};
}

SolverConfig solver_from(const json& j) {
  check_keys(j, "solver", {"lambda", "alpha", "P", "beta0", "max_iters", "rel_tol"});
  SolverConfig s;
  read(j, "lambda", s.lambda, "solver");
  read(j, "alpha", s.alpha, "solver");
  read(j, "P", s.P, "solver");
  read(j, "beta0", s.beta0, "solver");
  read(j, "max_iters", s.max_iters, "solver");
  read(j, "rel_tol", s.rel_tol, "solver");
  return s;
}

json to_json(const SolverConfig& s) {
  return {{"lambda", s.lambda}, {"alpha", s.alpha},         {"P", s.P},
          {"beta0", s.beta0},   {"max_iters", s.max_iters}, {"rel_tol", s.rel_tol}};
}

MeasureOptions measure_from(const json& j) {
  check_keys(j, "measure", {"rings", "edge_margin", "min_samples_per_cycle"});
  MeasureOptions m;
  read(j, "rings", m.rings, "measure");
  read(j, "edge_margin", m.edge_margin, "measure");
  read(j, "min_samples_per_cycle", m.ring.min_samples_per_cycle, "measure");
  return m;
}

json to_json(const MeasureOptions& m) {
  return {{"rings", m.rings},
          {"edge_margin", m.edge_margin},
          {"min_samples_per_cycle", m.ring.min_samples_per_cycle}};
}

ParameterDist dist_from(const json& j, const std::string& where, ParameterDist d) {
  check_keys(j, where, {"nominal", "low", "high", "distribution", "values"});
  read(j, "nominal", d.nominal, where);
  read(j, "low", d.low, where);
  read(j, "high", d.high, where);
  std::string dist = to_string(d.distribution);
  read(j, "distribution", dist, where);
  try {
    d.distribution = distribution_from_string(dist);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  read(j, "values", d.discrete_values, where);
  return d;
}

json to_json(const ParameterDist& d) {
  json j = {{"nominal", d.nominal},
            {"low", d.low},
            {"high", d.high},
            {"distribution", to_string(d.distribution)}};
  if (!d.discrete_values.empty()) j["values"] = d.discrete_values;
  return j;
}

MonteCarloConfig montecarlo_from(const json& j) {
  check_keys(j, "montecarlo", {"n_trials", "bin_width_m", "parameters"});
  MonteCarloConfig m;
  read(j, "n_trials", m.n_trials, "montecarlo");
  read(j, "bin_width_m", m.bin_width_m, "montecarlo");
  if (const auto it = j.find("parameters"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("montecarlo.parameters: expected an object");
    for (const auto& item : it->items()) {
      const std::string where = "montecarlo.parameters." + item.key();
      ParameterDist* slot = nullptr;
      for (auto& d : m.spec.parameters) {
        if (d.name == item.key()) slot = &d;
      }
      if (slot == nullptr) throw ConfigError(where + ": unknown parameter");
      *slot = dist_from(item.value(), where, *slot);
    }
  }
  return m;
}

json to_json(const MonteCarloConfig& m) {
  json params = json::object();
  for (const auto& d : m.spec.parameters) params[d.name] = to_json(d);
  return {{"n_trials", m.n_trials}, {"bin_width_m", m.bin_width_m}, {"parameters", params}};
}

SweepConfig sweep_from(const json& j) {
  check_keys(j, "sweep", {"parameter", "values", "parameter_b", "values_b", "seeds_per_value"});
  SweepConfig s;
  read(j, "parameter", s.parameter, "sweep");
  read(j, "values", s.values, "sweep");
  read(j, "parameter_b", s.parameter_b, "sweep");
  read(j, "values_b", s.values_b, "sweep");
  read(j, "seeds_per_value", s.seeds_per_value, "sweep");
  return s;
}

json to_json(const SweepConfig& s) {
  return {{"parameter", s.parameter},     {"values", s.values},
          {"parameter_b", s.parameter_b}, {"values_b", s.values_b},
          {"seeds_per_value", s.seeds_per_value}};
}

}  // namespace

Scenario ScenarioConfig::scenario() const {
  Scenario s;
  s.star = star;
  s.grid = grid;
  s.solver = solver;
  s.measure = measure;
  s.base = system;
  return s;
}

void ScenarioConfig::validate() const {
  try {
    star.validate();
    system.validate();
    solver.validate();
    montecarlo.spec.validate();
    if (grid.height < 2 || grid.width < 2) throw std::invalid_argument("grid must be at least 2x2");
    if (montecarlo.n_trials < 1) throw std::invalid_argument("montecarlo.n_trials must be >= 1");
    if (!(montecarlo.bin_width_m > 0.0)) {
      throw std::invalid_argument("montecarlo.bin_width_m must be > 0");
    }
    if (sweep.seeds_per_value < 1) throw std::invalid_argument("sweep.seeds_per_value must be >= 1");
    get_parameter(system, sweep.parameter);
    if (!sweep.parameter_b.empty()) get_parameter(system, sweep.parameter_b);
    if (measure.rings < 3) throw std::invalid_argument("measure.rings must be >= 3");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

ScenarioConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  check_keys(root, "config", {"star", "grid", "system", "solver", "measure",
                              "montecarlo", "sweep", "seed", "output_dir"});
  ScenarioConfig c;
  if (root.contains("star")) c.star = star_from(root["star"]);
  if (root.contains("grid")) {
    std::vector<int> g{c.grid.height, c.grid.width};
    read(root, "grid", g, "config");
    if (g.size() != 2) throw ConfigError("config.grid: need [height, width]");
    c.grid = {g[0], g[1]};
  }
  if (root.contains("system")) c.system = system_from(root["system"]);
  if (root.contains("solver")) c.solver = solver_from(root["solver"]);
  if (root.contains("measure")) c.measure = measure_from(root["measure"]);
  if (root.contains("montecarlo")) c.montecarlo = montecarlo_from(root["montecarlo"]);
  if (root.contains("sweep")) c.sweep = sweep_from(root["sweep"]);
  if (root.contains("seed") && !root["seed"].is_null()) {
    if (!root["seed"].is_number_unsigned()) {
      throw ConfigError("config.seed: expected a non-negative integer");
    }
    c.seed = root["seed"].get<std::uint64_t>();
  }
  read(root, "output_dir", c.output_dir, "config");
  c.solver.sr_factor = c.system.decimation;
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string dump_config(const ScenarioConfig& c) {
  json root = {{"star", to_json(c.star)},
               {"grid", {c.grid.height, c.grid.width}},
               {"system", to_json(c.system)},
               {"solver", to_json(c.solver)},
               {"measure", to_json(c.measure)},
               {"montecarlo", to_json(c.montecarlo)},
               {"sweep", to_json(c.sweep)},
               {"output_dir", c.output_dir}};
  if (c.seed) root["seed"] = *c.seed;
  return root.dump(2) + "\n";
}

}  // namespace srlab
