#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "srlab/cli.hpp"
#include "srlab/config.hpp"
#include "srlab/metrology.hpp"
#include "srlab/montecarlo.hpp"
#include "srlab/mtf.hpp"
#include "srlab/pgm.hpp"
#include "srlab/report.hpp"
#include "srlab/simulator.hpp"
#include "srlab/solver.hpp"
#include "srlab/target.hpp"

namespace py = pybind11;
using namespace srlab;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_numpy(const ImageGrid& g) {
  Array out({g.height(), g.width()});
  std::memcpy(out.mutable_data(), g.values().data(), g.values().size() * sizeof(double));
  return out;
}

ImageGrid from_numpy(const Array& a, double pitch = 1.0) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  std::vector<double> data(a.data(), a.data() + a.size());
  return ImageGrid(h, w, std::move(data), pitch);
}

py::tuple point(Point2 p) { return py::make_tuple(p.row, p.col); }
Point2 to_point(const std::pair<double, double>& t) { return {t.first, t.second}; }

py::dict trial_dict(const TrialResult& t) {
  py::dict d;
  py::dict params;
  for (const char* name : kParameterNames) params[name] = get_parameter(t.params, name);
  d["params"] = params;
  d["resolution_m"] = t.resolution_m;
  d["f_cross"] = t.f_cross;
  d["limited_by_ladder"] = t.limited_by_ladder;
  d["converged"] = t.solver_converged;
  d["iterations"] = t.iterations;
  d["seed"] = t.seed;
  d["failure"] = t.failure;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dual-subarray push-broom super-resolution lab";

  py::register_exception<MeasurementError>(m, "MeasurementError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<StarSpec>(m, "StarSpec")
      .def(py::init<>())
      .def_readwrite("cycles", &StarSpec::cycles)
      .def_readwrite("outer_radius", &StarSpec::outer_radius)
      .def_readwrite("inner_radius", &StarSpec::inner_radius)
      .def_readwrite("dark_level", &StarSpec::dark_level)
      .def_readwrite("bright_level", &StarSpec::bright_level)
      .def_readwrite("supersample", &StarSpec::supersample)
      .def_property(
          "center", [](const StarSpec& s) { return point(s.center); },
          [](StarSpec& s, std::pair<double, double> c) { s.center = to_point(c); });

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("optics_mtf", &SystemParams::optics_mtf_at_hr_nyq)
      .def_readwrite("clock_phases", &SystemParams::n_phi)
      .def_readwrite("jitter", &SystemParams::jitter_sigma)
      .def_readwrite("snr", &SystemParams::snr_at_300)
      .def_readwrite("subarray_shift", &SystemParams::subarray_shift_ax)
      .def_readwrite("subarray_shift_al_lines", &SystemParams::subarray_shift_al_lines)
      .def_readwrite("assumed_psf_sigma", &SystemParams::assumed_psf_sigma)
      .def_readwrite("assumed_psf_radius", &SystemParams::assumed_psf_radius)
      .def_readwrite("detector_width", &SystemParams::detector_width_w)
      .def_readwrite("smear_f_N", &SystemParams::smear_f_N)
      .def("validate", &SystemParams::validate)
      .def("__eq__", [](const SystemParams& a, const SystemParams& b) { return a == b; });

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &SolverConfig::lambda)
      .def_readwrite("alpha", &SolverConfig::alpha)
      .def_readwrite("P", &SolverConfig::P)
      .def_readwrite("beta0", &SolverConfig::beta0)
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("rel_tol", &SolverConfig::rel_tol);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init(&Scenario::defaults))
      .def_readwrite("star", &Scenario::star)
      .def_readwrite("solver", &Scenario::solver)
      .def_readwrite("base", &Scenario::base)
      .def_readwrite("signal", &Scenario::signal)
      .def_property(
          "grid", [](const Scenario& s) { return py::make_tuple(s.grid.height, s.grid.width); },
          [](Scenario& s, std::pair<int, int> g) { s.grid = {g.first, g.second}; });

  py::class_<Observation>(m, "Observation")
      .def_property_readonly("image", [](const Observation& o) { return to_numpy(o.image); })
      .def_property_readonly("shift_hr", [](const Observation& o) { return point(o.shift_hr); })
      .def_property_readonly("noise_sigma", [](const Observation& o) { return o.noise_sigma; })
      .def_property_readonly("decimation", [](const Observation& o) {
        return py::make_tuple(o.decimation.along, o.decimation.across);
      });

  py::class_<SrResult>(m, "SrResult")
      .def_property_readonly("image", [](const SrResult& r) { return to_numpy(r.image); })
      .def_readonly("cost_trace", &SrResult::cost_trace)
      .def_readonly("iterations_run", &SrResult::iterations_run)
      .def_readonly("converged", &SrResult::converged);

  py::class_<ResolutionReport>(m, "ResolutionReport")
      .def_property_readonly("f",
                             [](const ResolutionReport& r) {
                               std::vector<double> v;
                               for (const auto& p : r.curve) v.push_back(p.f);
                               return v;
                             })
      .def_property_readonly("M",
                             [](const ResolutionReport& r) {
                               std::vector<double> v;
                               for (const auto& p : r.curve) v.push_back(p.M);
                               return v;
                             })
      .def_readonly("nem", &ResolutionReport::nem)
      .def_readonly("f_cross", &ResolutionReport::f_cross)
      .def_readonly("resolution_m", &ResolutionReport::resolution_m)
      .def_readonly("sector", &ResolutionReport::sector)
      .def_readonly("degenerate", &ResolutionReport::degenerate)
      .def_readonly("limited_by_ladder", &ResolutionReport::limited_by_ladder)
      .def_readonly("dropped_rings", &ResolutionReport::dropped_rings);

  // Target
  m.def(
      "generate_target",
      [](const StarSpec& star, std::pair<int, int> size) {
        return to_numpy(generate_spoke_target(star, {size.first, size.second}));
      },
      py::arg("star") = StarSpec{}, py::arg("size") = std::pair{256, 256});

  // MTF chain
  m.def("optics_mtf", [](double f, double m_nyq) { return optics_mtf(f, m_nyq); }, py::arg("f"),
        py::arg("m_nyq"));
  m.def("footprint_mtf", &footprint_mtf, py::arg("f"), py::arg("w"));
  m.def("sampling_mtf", &sampling_mtf, py::arg("f"), py::arg("pitch"));
  m.def("smear_mtf", &smear_mtf, py::arg("f"), py::arg("f_N"), py::arg("n_phi"));
  m.def("jitter_mtf", &jitter_mtf, py::arg("f"), py::arg("sigma"));
  m.def(
      "system_otf",
      [](const SystemParams& p, double fx, double fy) { return system_otf(p.mtf_chain(), fx, fy); },
      py::arg("params"), py::arg("fx"), py::arg("fy"));
  m.def(
      "mtf_curves",
      [](const SystemParams& p, int rows) {
        py::dict d;
        std::vector<double> f, optics, footprint, sampling, smear, jitter, system;
        for (const auto& r : mtf_curves(p.mtf_chain(), rows)) {
          f.push_back(r.f);
          optics.push_back(r.optics);
          footprint.push_back(r.footprint);
          sampling.push_back(r.sampling);
          smear.push_back(r.smear);
          jitter.push_back(r.jitter);
          system.push_back(r.system);
        }
        d["f"] = f;
        d["optics"] = optics;
        d["footprint"] = footprint;
        d["sampling"] = sampling;
        d["smear"] = smear;
        d["jitter"] = jitter;
        d["system"] = system;
        return d;
      },
      py::arg("params") = SystemParams{}, py::arg("rows") = 512);

  // Simulation and reconstruction
  m.def(
      "simulate",
      [](const Array& target, const SystemParams& p, std::uint64_t seed, double pitch) {
        const ImageGrid t = from_numpy(target, pitch);
        py::gil_scoped_release release;
        auto [a, b] = simulate_observations(t, p, seed);
        return std::vector<Observation>{std::move(a), std::move(b)};
      },
      py::arg("target"), py::arg("params") = SystemParams{}, py::arg("seed") = 0,
      py::arg("pitch") = 1.0);
  m.def(
      "super_resolve",
      [](const std::vector<Observation>& obs, const SolverConfig& cfg,
         std::optional<Array> init) {
        std::optional<ImageGrid> x0;
        if (init) x0 = from_numpy(*init);
        SolverConfig c = cfg;
        if (!obs.empty()) c.sr_factor = obs.front().decimation;
        py::gil_scoped_release release;
        return super_resolve(obs, x0, c);
      },
      py::arg("observations"), py::arg("config") = SolverConfig{}, py::arg("init") = py::none());
  m.def(
      "bicubic_upsample",
      [](const Observation& o) { return to_numpy(bicubic_upsample(o)); }, py::arg("observation"));

  // Metrology
  m.def("nem", &nem, py::arg("signal"), py::arg("noise_sigma"));
  m.def("frequency_to_resolution",
        [](double f, double pitch) { return frequency_to_resolution(f, pitch); }, py::arg("f"),
        py::arg("pitch") = 1.0);
  m.def(
      "measure_resolution",
      [](const Array& image, const StarSpec& star, double signal, double noise_sigma,
         std::optional<int> sector) {
        return measure_resolution(from_numpy(image), star, signal, noise_sigma, sector);
      },
      py::arg("image"), py::arg("star") = StarSpec{}, py::arg("signal") = kReferenceSignal,
      py::arg("noise_sigma") = 5.0, py::arg("sector") = py::none());

  // Monte Carlo
  m.attr("PARAMETER_NAMES") = [] {
    std::vector<std::string> v(std::begin(kParameterNames), std::end(kParameterNames));
    return v;
  }();
  m.def(
      "sample_parameters",
      [](std::uint64_t seed) {
        return sample_parameters(ParameterSpec::defaults(), seed);
      },
      py::arg("seed"));
  m.def(
      "run_trial",
      [](const SystemParams& p, const Scenario& sc, std::uint64_t seed) {
        TrialResult t;
        {
          py::gil_scoped_release release;
          t = run_trial(p, sc, seed);
        }
        return trial_dict(t);
      },
      py::arg("params") = SystemParams{}, py::arg("scenario") = Scenario::defaults(),
      py::arg("seed") = 0);
  m.def(
      "run_campaign",
      [](int n_trials, std::uint64_t seed, const Scenario& sc, int threads, double bin_width) {
        CampaignResult r;
        {
          py::gil_scoped_release release;
          r = run_campaign(ParameterSpec::defaults(), sc, n_trials, seed, bin_width, {threads, {}});
        }
        py::dict d;
        py::list trials;
        for (const auto& t : r.trials) trials.append(trial_dict(t));
        d["trials"] = trials;
        d["mode_m"] = r.mode_m;
        d["mean_m"] = r.mean_m;
        d["p10_m"] = r.p10_m;
        d["p90_m"] = r.p90_m;
        d["resolved"] = r.resolved;
        d["failed"] = r.failed;
        std::vector<double> lower;
        for (std::size_t i = 0; i < r.histogram.counts.size(); ++i)
          lower.push_back(r.histogram.lower_edge(i));
        d["histogram_lower_m"] = lower;
        d["histogram_counts"] = r.histogram.counts;
        d["trials_csv"] = trials_csv(r.trials);
        return d;
      },
      py::arg("n_trials"), py::arg("seed"), py::arg("scenario") = Scenario::defaults(),
      py::arg("threads") = 1, py::arg("bin_width_m") = 0.05);
  m.def(
      "sweep",
      [](const std::string& parameter, const std::vector<double>& values, int seeds_per_value,
         std::uint64_t seed, const Scenario& sc, int threads) {
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = sweep(parameter, values, ParameterSpec::defaults().nominal(sc.base), sc,
                    seeds_per_value, seed, {threads, {}});
        }
        py::dict d;
        d["parameter"] = r.parameter;
        d["values"] = r.values;
        d["mean_resolution_m"] = r.mean_resolution_m;
        return d;
      },
      py::arg("parameter"), py::arg("values"), py::arg("seeds_per_value") = 5,
      py::arg("seed") = 0, py::arg("scenario") = Scenario::defaults(), py::arg("threads") = 1);

  // I/O and CLI
  m.def("read_pgm", [](const std::filesystem::path& p) { return to_numpy(read_pgm(p)); });
  m.def("write_pgm", [](const std::filesystem::path& p, const Array& a) {
    write_pgm(p, from_numpy(a));
  });
  m.def(
      "load_scenario",
      [](const std::filesystem::path& p) { return load_config(p).scenario(); }, py::arg("path"));
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> all{"srlab"};
        all.insert(all.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : all) argv.push_back(a.c_str());
        std::ostringstream err;
        int rc;
        {
          py::gil_scoped_release release;
          rc = run_cli(static_cast<int>(argv.size()), argv.data(), err);
        }
        return py::make_tuple(rc, err.str());
      },
      py::arg("args"));
}
