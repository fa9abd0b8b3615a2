#pragma once

#include <complex>
#include <vector>

#include "srlab/image_grid.hpp"

namespace srlab::fft {

using Complex = std::complex<double>;

/// Row-major complex spectrum of a (rows x cols) grid.
struct Spectrum {
  int rows = 0;
  int cols = 0;
  std::vector<Complex> bins;

  Complex& at(int r, int c) {
    return bins[static_cast<std::size_t>(r) * cols + c];
  }
  Complex at(int r, int c) const {
    return bins[static_cast<std::size_t>(r) * cols + c];
  }
};

/// Unnormalised forward DFT of a real image.
Spectrum forward(const ImageGrid& image);

/// Inverse DFT (scaled by 1/N), real part kept.
ImageGrid inverse_real(Spectrum spectrum, double pitch = 1.0,
                       Point2 origin = {});

/// In-place 2-D transform. sign = -1 forward, +1 backward (unnormalised).
void transform(std::vector<Complex>& data, int rows, int cols, int sign);

/// Signed DFT frequency of bin k on an n-point axis, cycles per sample.
/// Bins above n/2 map to negative frequencies; the n/2 bin maps to +0.5.
inline double bin_frequency(int k, int n) {
  return (2 * k > n ? k - n : k) / static_cast<double>(n);
}

}  // namespace srlab::fft
