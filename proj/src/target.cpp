#include "srlab/target.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "srlab/metrology.hpp"

namespace srlab {

void StarSpec::validate() const {
  const bool finite = std::isfinite(outer_radius) &&
                      std::isfinite(inner_radius) &&
                      std::isfinite(dark_level) &&
                      std::isfinite(bright_level) &&
                      std::isfinite(center.row) && std::isfinite(center.col);
  if (!finite) throw std::invalid_argument("StarSpec: non-finite value");
  if (cycles < 1) throw std::invalid_argument("StarSpec: cycles must be >= 1");
  if (inner_radius < 0.0 || !(inner_radius < outer_radius)) {
    throw std::invalid_argument(
        "StarSpec: require 0 <= inner_radius < outer_radius");
  }
  if (!(dark_level < bright_level)) {
    throw std::invalid_argument("StarSpec: dark_level must be < bright_level");
  }
  if (supersample < 1) {
    throw std::invalid_argument("StarSpec: supersample must be >= 1");
  }
}

ImageGrid generate_spoke_target(const StarSpec& spec, GridSize size) {
  spec.validate();
  const auto& c = spec.center;
  const double r = spec.outer_radius;
  if (c.row - r < 0.0 || c.col - r < 0.0 || c.row + r > size.height - 1 ||
      c.col + r > size.width - 1) {
    throw std::invalid_argument("generate_spoke_target: grid clips the star");
  }

  const int ss = spec.supersample;
  const double mean = spec.mean_level();
  const double r_in2 = spec.inner_radius * spec.inner_radius;
  const double r_out2 = r * r;
  ImageGrid out(size.height, size.width);

  for (int row = 0; row < size.height; ++row) {
    for (int col = 0; col < size.width; ++col) {
      double acc = 0.0;
      for (int i = 0; i < ss; ++i) {
        const double y = row - c.row + (i + 0.5) / ss - 0.5;
        for (int j = 0; j < ss; ++j) {
          const double x = col - c.col + (j + 0.5) / ss - 0.5;
          const double rho2 = x * x + y * y;
          if (rho2 >= r_out2 || rho2 < r_in2 || rho2 == 0.0) {
            acc += mean;
          } else {
            const double phase = std::cos(spec.cycles * std::atan2(x, y));
            acc += phase >= 0.0 ? spec.bright_level : spec.dark_level;
          }
        }
      }
      out(row, col) = acc / (ss * ss);
    }
  }
  return out;
}

ImageGrid sector_mask(GridSize size, Point2 center, int sector_index,
                      int sector_count) {
  if (sector_count <= 0) {
    throw std::invalid_argument("sector_mask: sector_count must be > 0");
  }
  if (sector_index < 0 || sector_index >= sector_count) {
    throw std::invalid_argument("sector_mask: sector_index out of range");
  }
  const double span = 2.0 * std::numbers::pi / sector_count;
  ImageGrid mask(size.height, size.width);
  for (int row = 0; row < size.height; ++row) {
    for (int col = 0; col < size.width; ++col) {
      const double x = col - center.col;
      const double y = row - center.row;
      if (x == 0.0 && y == 0.0) continue;
      int k = static_cast<int>(std::floor(pixel_angle(x, y) / span));
      if (k >= sector_count) k = sector_count - 1;
      mask(row, col) = k == sector_index ? 1.0 : 0.0;
    }
  }
  return mask;
}

}  // namespace srlab
