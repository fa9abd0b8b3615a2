#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "srlab/fft.hpp"
#include "srlab/image_grid.hpp"
#include "srlab/mtf.hpp"

namespace srlab {

/// Square, odd-sized, centered convolution kernel.
struct PsfKernel {
  int radius = 0;
  std::vector<double> taps{1.0};  // (2r+1)^2, row-major

  int side() const { return 2 * radius + 1; }
  double at(int dy, int dx) const {
    return taps[static_cast<std::size_t>(dy + radius) * side() + dx + radius];
  }
  double sum() const;
};

PsfKernel delta_psf();

/// Sampled isotropic Gaussian, normalised to unit sum. Radius defaults to
/// ceil(4 sigma).
PsfKernel gaussian_psf(double sigma, int radius = -1);

/// Circular-convolution transfer function of `kernel` on a rows x cols grid.
std::vector<fft::Complex> kernel_transfer(const PsfKernel& kernel, int rows,
                                          int cols);

/// Simulated payload state. Shifts and widths in HR pixels unless noted.
struct SystemParams {
  double optics_mtf_at_hr_nyq = 0.30;
  int n_phi = 1;
  double jitter_sigma = 0.1;
  double snr_at_300 = 60.0;
  double subarray_shift_ax = 0.5;  // LR pixels
  int subarray_shift_al_lines = 10;  // LR lines
  double assumed_psf_sigma = 0.5;  // solver's PSF model, HR px
  int assumed_psf_radius = 2;      // kernel half-width, HR px
  double detector_width_w = 2.0;
  double smear_f_N = 0.5;
  Factor2 decimation{1, 2};
  GeometryConstants geometry{};

  MtfChainParams mtf_chain() const;
  void validate() const;

  friend bool operator==(const SystemParams& a, const SystemParams& b) {
    return a.optics_mtf_at_hr_nyq == b.optics_mtf_at_hr_nyq &&
           a.n_phi == b.n_phi && a.jitter_sigma == b.jitter_sigma &&
           a.snr_at_300 == b.snr_at_300 &&
           a.subarray_shift_ax == b.subarray_shift_ax &&
           a.subarray_shift_al_lines == b.subarray_shift_al_lines &&
           a.assumed_psf_sigma == b.assumed_psf_sigma &&
           a.assumed_psf_radius == b.assumed_psf_radius &&
           a.detector_width_w == b.detector_width_w &&
           a.smear_f_N == b.smear_f_N && a.decimation == b.decimation;
  }
};

/// Reference signal level (15% albedo) that SNR and NEM are quoted at.
inline constexpr double kReferenceSignal = 300.0;

/// One low-resolution subarray image plus the metadata the solver needs.
struct Observation {
  ImageGrid image;
  Point2 shift_hr;  // (along, across), relative to observation 1
  Factor2 decimation{1, 2};
  PsfKernel assumed_psf;
  double noise_sigma = 0.0;

  GridSize hr_size() const {
    return {image.height() * decimation.along,
            image.width() * decimation.across};
  }
};

/// Filters `target` by the system OTF and, when supersampled (pitch < 1),
/// resamples to pitch 1 with a Lanczos-3 windowed sinc. 1/pitch must be an
/// integer.
ImageGrid render_blurred_scene(const ImageGrid& target,
                               const SystemParams& params);

/// Circular sub-pixel translation out(r, c) = in(r - d_along, c - d_across)
/// by Fourier phase ramp.
ImageGrid shift_image(const ImageGrid& image, Point2 shift_hr);

/// Translate then keep every s-th sample per axis starting at 0.
ImageGrid sample_subarray(const ImageGrid& blurred, Point2 shift_hr,
                          Factor2 decimation);

struct NoisyImage {
  ImageGrid image;
  double noise_sigma;
};

/// Adds white Gaussian noise, sigma = 300 / snr_at_300.
NoisyImage add_noise(const ImageGrid& image, double snr_at_300,
                     std::uint64_t rng_seed);

/// Blur once, then sample subarray 1 (no shift) and subarray 2 (staggered
/// across-track, separated along-track), each with its own noise stream.
std::pair<Observation, Observation> simulate_observations(
    const ImageGrid& target, const SystemParams& params,
    std::uint64_t rng_seed);

}  // namespace srlab
