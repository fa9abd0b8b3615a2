#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "srlab/fft.hpp"
#include "support.hpp"

using namespace srlab;

// Direct O(N^2) DFT.
static fft::Complex dft_bin(const ImageGrid& img, int u, int v) {
  fft::Complex acc = 0.0;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const double ph = -2.0 * std::numbers::pi *
                        (double(u) * r / img.height() + double(v) * c / img.width());
      acc += img(r, c) * fft::Complex(std::cos(ph), std::sin(ph));
    }
  }
  return acc;
}

TEST(Fft, ForwardMatchesDirectDft) {
  const ImageGrid img = support::random_image(6, 10, 3);
  const fft::Spectrum s = fft::forward(img);
  for (int u = 0; u < 6; ++u) {
    for (int v = 0; v < 10; ++v) {
      EXPECT_LT(std::abs(s.at(u, v) - dft_bin(img, u, v)), 1e-10);
    }
  }
}

TEST(Fft, InverseRecoversImage) {
  const ImageGrid img = support::random_image(8, 12, 4);
  const ImageGrid back = fft::inverse_real(fft::forward(img));
  EXPECT_LT(support::max_abs_diff(img, back), 1e-12);
}

TEST(Fft, BinFrequencyConvention) {
  EXPECT_DOUBLE_EQ(fft::bin_frequency(0, 8), 0.0);
  EXPECT_DOUBLE_EQ(fft::bin_frequency(3, 8), 0.375);
  EXPECT_DOUBLE_EQ(fft::bin_frequency(4, 8), 0.5);
  EXPECT_DOUBLE_EQ(fft::bin_frequency(5, 8), -0.375);
  EXPECT_DOUBLE_EQ(fft::bin_frequency(3, 7), 3.0 / 7.0);
  EXPECT_DOUBLE_EQ(fft::bin_frequency(4, 7), -3.0 / 7.0);
}
