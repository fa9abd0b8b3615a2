#pragma once

#include <optional>
#include <vector>

namespace srlab {

/// Fixed focal-plane and ground geometry of the dual-subarray payload.
struct GeometryConstants {
  double hr_sample_pitch_um = 4.0;
  double lr_pixel_pitch_um = 8.0;
  double hr_gsd_m = 1.25;
  double lr_igfov_m = 2.5;
  double f_nyq_hr = 0.5;   // cycles / HR sample
  double f_nyq_lr = 0.25;  // cycles / HR sample

  /// HR samples spanned by one detector pixel (2 for the nominal layout).
  double lr_to_hr() const { return lr_pixel_pitch_um / hr_sample_pitch_um; }
};

inline constexpr GeometryConstants kGeometry{};

/// Parameters of the composed system transfer function. Frequencies are in
/// cycles per HR sample, lengths in HR pixels.
struct MtfChainParams {
  double optics_mtf_at_hr_nyq = 0.30;
  int n_phi = 1;
  double jitter_sigma = 0.1;
  double detector_width_w = 2.0;
  double smear_f_N = 0.5;

  // Analysis-only diffraction inputs; not part of system_otf.
  std::optional<double> wavelength_um;
  std::optional<double> f_number;

  void validate() const;
};

/// f_lpmm * hr_sample_pitch_um / 1000.
double lpmm_to_cycles_per_hr_sample(double f_lpmm,
                                    const GeometryConstants& geo = kGeometry);

/// Diffraction cutoff 1 / (lambda * F#) in cycles/mm.
double diffraction_cutoff_lpmm(double wavelength_um, double f_number);

/// Blur-spot diameter 2.44 * lambda * F#, micrometres.
double diffraction_blur_diameter_um(double wavelength_um, double f_number);

/// Circular-aperture diffraction MTF of normalised frequency sigma/cutoff.
double diffraction_mtf(double sigma_norm);

/// Realizable optics: m_nyq^(f / f_nyq_hr).
double optics_mtf(double f, double m_nyq,
                  const GeometryConstants& geo = kGeometry);

double footprint_mtf(double f, double w);
double sampling_mtf(double f, double samp_pitch);

/// Discrete TDI charge-motion MTF, sinc((pi/2)(f/f_N)/n_phi).
double smear_mtf(double f, double f_N, int n_phi);

/// Gaussian line-of-sight jitter, exp(-2 pi^2 sigma^2 f^2).
double jitter_mtf(double f, double sigma);

/// Zero-phase system transfer function. fx is across-track (columns),
/// fy is along-track (rows); smear acts on fy only.
double system_otf(const MtfChainParams& params, double fx, double fy);

struct MtfCurveRow {
  double f = 0.0;
  double optics = 0.0;
  double footprint = 0.0;
  double sampling = 0.0;
  double smear = 0.0;
  double jitter = 0.0;
  double system = 0.0;
};

/// Component MTFs sampled on `rows` points over [0, f_nyq_hr]. The sampling
/// term uses the LR detector pitch; system is the along-track cut.
std::vector<MtfCurveRow> mtf_curves(const MtfChainParams& params,
                                    int rows = 512,
                                    const GeometryConstants& geo = kGeometry);

}  // namespace srlab
