#pragma once

#include "srlab/image_grid.hpp"

namespace srlab {

/// Siemens star description. Radii and center are in HR pixels.
struct StarSpec {
  int cycles = 144;
  double outer_radius = 104.0;
  double inner_radius = 8.0;
  double dark_level = 0.0;
  double bright_level = 600.0;
  Point2 center{128.0, 128.0};
  int supersample = 4;

  double mean_level() const { return 0.5 * (dark_level + bright_level); }
  void validate() const;
};

/// Binary spoke pattern area-averaged over supersample^2 points per cell.
/// Bright where cos(cycles * atan2(x, y)) >= 0, x = col offset,
/// y = row offset. Dead zone and background take the mean level.
ImageGrid generate_spoke_target(const StarSpec& spec, GridSize size);

/// 1 where the pixel angle lies in
/// [sector_index, sector_index + 1) * 2pi / sector_count, else 0.
/// The exact center cell has no angle and is always 0.
ImageGrid sector_mask(GridSize size, Point2 center, int sector_index,
                      int sector_count = 8);

}  // namespace srlab
