#include "srlab/mtf.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace srlab {
namespace {

constexpr double kPi = std::numbers::pi;

double sinc_unnormalized(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void require_nonnegative(double f, const char* what) {
  if (!(f >= 0.0)) throw std::invalid_argument(std::string(what) + ": f < 0");
}

}  // namespace

void MtfChainParams::validate() const {
  if (!(optics_mtf_at_hr_nyq > 0.0 && optics_mtf_at_hr_nyq <= 1.0)) {
    throw std::invalid_argument("optics_mtf_at_hr_nyq must be in (0, 1]");
  }
  if (n_phi < 1) throw std::invalid_argument("n_phi must be >= 1");
  if (!(jitter_sigma >= 0.0)) throw std::invalid_argument("jitter_sigma < 0");
  if (!(detector_width_w > 0.0)) {
    throw std::invalid_argument("detector_width_w must be > 0");
  }
  if (!(smear_f_N > 0.0)) throw std::invalid_argument("smear_f_N must be > 0");
}

double lpmm_to_cycles_per_hr_sample(double f_lpmm,
                                    const GeometryConstants& geo) {
  if (!(f_lpmm >= 0.0)) {
    throw std::invalid_argument("lpmm_to_cycles_per_hr_sample: negative input");
  }
  return f_lpmm * geo.hr_sample_pitch_um / 1000.0;
}

double diffraction_cutoff_lpmm(double wavelength_um, double f_number) {
  if (!(wavelength_um > 0.0 && f_number > 0.0)) {
    throw std::invalid_argument("diffraction_cutoff_lpmm: inputs must be > 0");
  }
  return 1000.0 / (wavelength_um * f_number);
}

double diffraction_blur_diameter_um(double wavelength_um, double f_number) {
  return 2.44 * wavelength_um * f_number;
}

double diffraction_mtf(double sigma_norm) {
  if (!(sigma_norm >= 0.0)) {
    throw std::invalid_argument("diffraction_mtf: normalised frequency < 0");
  }
  if (sigma_norm >= 1.0) return 0.0;
  return (2.0 / kPi) * (std::acos(sigma_norm) -
                        sigma_norm * std::sqrt(1.0 - sigma_norm * sigma_norm));
}

double optics_mtf(double f, double m_nyq, const GeometryConstants& geo) {
  require_nonnegative(f, "optics_mtf");
  if (!(m_nyq > 0.0)) throw std::invalid_argument("optics_mtf: m_nyq <= 0");
  return std::pow(m_nyq, f / geo.f_nyq_hr);
}

double footprint_mtf(double f, double w) {
  require_nonnegative(f, "footprint_mtf");
  if (!(w > 0.0)) throw std::invalid_argument("footprint_mtf: w <= 0");
  return std::abs(sinc_unnormalized(kPi * f * w));
}

double sampling_mtf(double f, double samp_pitch) {
  require_nonnegative(f, "sampling_mtf");
  if (!(samp_pitch > 0.0)) {
    throw std::invalid_argument("sampling_mtf: pitch <= 0");
  }
  return std::abs(sinc_unnormalized(kPi * f * samp_pitch));
}

double smear_mtf(double f, double f_N, int n_phi) {
  require_nonnegative(f, "smear_mtf");
  if (!(f_N > 0.0) || n_phi < 1) {
    throw std::invalid_argument("smear_mtf: need f_N > 0 and n_phi >= 1");
  }
  return sinc_unnormalized(0.5 * kPi * (f / f_N) / n_phi);
}

double jitter_mtf(double f, double sigma) {
  require_nonnegative(f, "jitter_mtf");
  if (!(sigma >= 0.0)) throw std::invalid_argument("jitter_mtf: sigma < 0");
  return std::exp(-2.0 * kPi * kPi * sigma * sigma * f * f);
}

double system_otf(const MtfChainParams& p, double fx, double fy) {
  const double ax = std::abs(fx);
  const double ay = std::abs(fy);
  const double radial = std::hypot(fx, fy);
  return optics_mtf(radial, p.optics_mtf_at_hr_nyq) *
         footprint_mtf(ax, p.detector_width_w) *
         footprint_mtf(ay, p.detector_width_w) *
         jitter_mtf(radial, p.jitter_sigma) *
         std::abs(smear_mtf(ay, p.smear_f_N, p.n_phi));
}

std::vector<MtfCurveRow> mtf_curves(const MtfChainParams& params, int rows,
                                    const GeometryConstants& geo) {
  params.validate();
  if (rows < 2) throw std::invalid_argument("mtf_curves: rows must be >= 2");
  std::vector<MtfCurveRow> out;
  out.reserve(rows);
  for (int i = 0; i < rows; ++i) {
    const double f = geo.f_nyq_hr * i / (rows - 1);
    MtfCurveRow row;
    row.f = f;
    row.optics = optics_mtf(f, params.optics_mtf_at_hr_nyq, geo);
    row.footprint = footprint_mtf(f, params.detector_width_w);
    row.sampling = sampling_mtf(f, geo.lr_to_hr());
    row.smear = smear_mtf(f, params.smear_f_N, params.n_phi);
    row.jitter = jitter_mtf(f, params.jitter_sigma);
    row.system = system_otf(params, 0.0, f);
    out.push_back(row);
  }
  return out;
}

}  // namespace srlab
