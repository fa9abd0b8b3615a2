#pragma once

#include <cstdint>
#include <random>

#include "srlab/image_grid.hpp"

namespace srlab::support {

inline ImageGrid random_image(int h, int w, std::uint64_t seed, double lo = -1.0,
                              double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  ImageGrid img(h, w);
  for (double& v : img.data()) v = u(rng);
  return img;
}

inline double max_abs_diff(const ImageGrid& a, const ImageGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.count(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

}  // namespace srlab::support
