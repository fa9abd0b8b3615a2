#include "srlab/simulator.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "srlab/seeding.hpp"

namespace srlab {
namespace {

constexpr double kPi = std::numbers::pi;

double lanczos3(double t) {
  if (t == 0.0) return 1.0;
  if (std::abs(t) >= 3.0) return 0.0;
  const double a = kPi * t;
  return 3.0 * std::sin(a) * std::sin(a / 3.0) / (a * a);
}

// Resample a filtered fine grid (integer factor m finer than HR) onto the
// HR grid. HR cell j is centred at fine coordinate j*m + (m-1)/2.
ImageGrid lanczos_downsample(const ImageGrid& fine, int m) {
  const int out_h = fine.height() / m;
  const int out_w = fine.width() / m;
  const double offset = 0.5 * (m - 1);
  const int reach = 3 * m;

  std::vector<int> taps_idx;
  std::vector<double> taps_w;
  for (int k = -reach; k <= reach + 1; ++k) {
    const double t = (k - offset) / m;
    const double w = lanczos3(t);
    if (w != 0.0) {
      taps_idx.push_back(k);
      taps_w.push_back(w);
    }
  }
  const double norm = std::accumulate(taps_w.begin(), taps_w.end(), 0.0);
  for (double& w : taps_w) w /= norm;

  // Columns first, then rows; both circular.
  ImageGrid tmp(fine.height(), out_w, fine.pitch());
  for (int r = 0; r < fine.height(); ++r) {
    for (int j = 0; j < out_w; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < taps_idx.size(); ++t) {
        acc += taps_w[t] * fine.wrapped(r, j * m + taps_idx[t]);
      }
      tmp(r, j) = acc;
    }
  }
  ImageGrid out(out_h, out_w, 1.0, fine.origin());
  for (int i = 0; i < out_h; ++i) {
    for (int j = 0; j < out_w; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < taps_idx.size(); ++t) {
        acc += taps_w[t] * tmp.wrapped(i * m + taps_idx[t], j);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

double PsfKernel::sum() const {
  return std::accumulate(taps.begin(), taps.end(), 0.0);
}

PsfKernel delta_psf() { return PsfKernel{}; }

PsfKernel gaussian_psf(double sigma, int radius) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("gaussian_psf: sigma must be > 0");
  }
  if (radius < 0) radius = static_cast<int>(std::ceil(4.0 * sigma));
  PsfKernel k;
  k.radius = radius;
  k.taps.assign(static_cast<std::size_t>(k.side()) * k.side(), 0.0);
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      k.taps[static_cast<std::size_t>(dy + radius) * k.side() + dx + radius] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  }
  const double s = k.sum();
  for (double& t : k.taps) t /= s;
  return k;
}

std::vector<fft::Complex> kernel_transfer(const PsfKernel& kernel, int rows,
                                          int cols) {
  if (kernel.side() > rows || kernel.side() > cols) {
    throw DimensionMismatch("kernel_transfer: kernel larger than grid");
  }
  ImageGrid wrapped(rows, cols);
  for (int dy = -kernel.radius; dy <= kernel.radius; ++dy) {
    for (int dx = -kernel.radius; dx <= kernel.radius; ++dx) {
      const int r = (dy + rows) % rows;
      const int c = (dx + cols) % cols;
      wrapped(r, c) += kernel.at(dy, dx);
    }
  }
  return fft::forward(wrapped).bins;
}

MtfChainParams SystemParams::mtf_chain() const {
  MtfChainParams p;
  p.optics_mtf_at_hr_nyq = optics_mtf_at_hr_nyq;
  p.n_phi = n_phi;
  p.jitter_sigma = jitter_sigma;
  p.detector_width_w = detector_width_w;
  p.smear_f_N = smear_f_N;
  return p;
}

void SystemParams::validate() const {
  mtf_chain().validate();
  if (!(snr_at_300 > 0.0)) throw std::invalid_argument("snr_at_300 must be > 0");
  if (!(subarray_shift_ax >= 0.0 && subarray_shift_ax < 1.0)) {
    throw std::invalid_argument("subarray_shift_ax must be in [0, 1)");
  }
  if (!(assumed_psf_sigma > 0.0) || !std::isfinite(assumed_psf_sigma)) {
    throw std::invalid_argument("assumed_psf_sigma must be > 0");
  }
  if (assumed_psf_radius < 0 || assumed_psf_radius > 16) {
    throw std::invalid_argument("assumed_psf_radius must be in [0, 16]");
  }
  if (decimation.along < 1 || decimation.across < 1) {
    throw std::invalid_argument("decimation factors must be >= 1");
  }
}

ImageGrid render_blurred_scene(const ImageGrid& target,
                               const SystemParams& params) {
  params.validate();
  if (target.height() % 2 != 0 || target.width() % 2 != 0) {
    throw std::invalid_argument("render_blurred_scene: dimensions must be even");
  }
  if (!target.all_finite()) {
    throw std::invalid_argument("render_blurred_scene: non-finite target");
  }
  const double pitch = target.pitch();
  if (pitch > 1.0) {
    throw std::invalid_argument("render_blurred_scene: target pitch must be <= 1");
  }
  const int factor = static_cast<int>(std::lround(1.0 / pitch));
  if (std::abs(factor * pitch - 1.0) > 1e-9) {
    throw std::invalid_argument("render_blurred_scene: 1/pitch must be integral");
  }
  if (target.height() % factor != 0 || target.width() % factor != 0) {
    throw std::invalid_argument(
        "render_blurred_scene: dimensions must be divisible by 1/pitch");
  }

  const MtfChainParams chain = params.mtf_chain();
  fft::Spectrum spec = fft::forward(target);
  for (int r = 0; r < spec.rows; ++r) {
    const double fy = fft::bin_frequency(r, spec.rows) / pitch;
    for (int c = 0; c < spec.cols; ++c) {
      const double fx = fft::bin_frequency(c, spec.cols) / pitch;
      spec.at(r, c) *= system_otf(chain, fx, fy);
    }
  }
  ImageGrid filtered = fft::inverse_real(std::move(spec), pitch, target.origin());
  if (factor == 1) return filtered;
  return lanczos_downsample(filtered, factor);
}

ImageGrid shift_image(const ImageGrid& image, Point2 shift_hr) {
  if (!std::isfinite(shift_hr.row) || !std::isfinite(shift_hr.col)) {
    throw std::invalid_argument("shift_image: non-finite shift");
  }
  if (shift_hr.row == 0.0 && shift_hr.col == 0.0) return image;
  fft::Spectrum spec = fft::forward(image);
  std::vector<fft::Complex> col_ramp(spec.cols);
  for (int c = 0; c < spec.cols; ++c) {
    col_ramp[c] = std::polar(
        1.0, -2.0 * kPi * fft::bin_frequency(c, spec.cols) * shift_hr.col);
  }
  for (int r = 0; r < spec.rows; ++r) {
    const fft::Complex row_ramp = std::polar(
        1.0, -2.0 * kPi * fft::bin_frequency(r, spec.rows) * shift_hr.row);
    for (int c = 0; c < spec.cols; ++c) spec.at(r, c) *= row_ramp * col_ramp[c];
  }
  return fft::inverse_real(std::move(spec), image.pitch(), image.origin());
}

ImageGrid sample_subarray(const ImageGrid& blurred, Point2 shift_hr,
                          Factor2 decimation) {
  if (decimation.along < 1 || decimation.across < 1) {
    throw std::invalid_argument("sample_subarray: decimation must be >= 1");
  }
  if (decimation.along * 2 > blurred.height() ||
      decimation.across * 2 > blurred.width()) {
    throw std::invalid_argument("sample_subarray: decimation exceeds image size");
  }
  const ImageGrid shifted = shift_image(blurred, shift_hr);
  const int h = blurred.height() / decimation.along;
  const int w = blurred.width() / decimation.across;
  ImageGrid out(h, w, blurred.pitch(), blurred.origin());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out(r, c) = shifted(r * decimation.along, c * decimation.across);
    }
  }
  return out;
}

NoisyImage add_noise(const ImageGrid& image, double snr_at_300,
                     std::uint64_t rng_seed) {
  if (!(snr_at_300 > 0.0)) throw std::invalid_argument("add_noise: snr <= 0");
  const double sigma = kReferenceSignal / snr_at_300;
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ImageGrid out = image;
  for (double& v : out.data()) v += sigma * normal(rng);
  return {std::move(out), sigma};
}

std::pair<Observation, Observation> simulate_observations(
    const ImageGrid& target, const SystemParams& params,
    std::uint64_t rng_seed) {
  const ImageGrid blurred = render_blurred_scene(target, params);
  const double lr_to_hr = params.geometry.lr_to_hr();
  const Point2 shift1{0.0, 0.0};
  const Point2 shift2{params.subarray_shift_al_lines * lr_to_hr,
                      params.subarray_shift_ax * lr_to_hr};
  const PsfKernel psf = gaussian_psf(params.assumed_psf_sigma, params.assumed_psf_radius);

  auto make = [&](Point2 shift, std::uint64_t stream) {
    const ImageGrid clean = sample_subarray(blurred, shift, params.decimation);
    NoisyImage noisy =
        add_noise(clean, params.snr_at_300, derive_seed(rng_seed, stream));
    return Observation{std::move(noisy.image), shift, params.decimation, psf,
                       noisy.noise_sigma};
  };
  return {make(shift1, 0), make(shift2, 1)};
}

}  // namespace srlab
