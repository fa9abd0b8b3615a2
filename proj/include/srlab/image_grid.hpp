#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace srlab {

struct GridSize {
  int height = 0;
  int width = 0;

  friend bool operator==(const GridSize&, const GridSize&) = default;
};

/// Position in HR-pixel coordinates, (row, col).
struct Point2 {
  double row = 0.0;
  double col = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Integer per-axis factors, (along-track = rows, across-track = cols).
struct Factor2 {
  int along = 1;
  int across = 1;

  friend bool operator==(const Factor2&, const Factor2&) = default;
};

/// 2-D real raster, row-major. `pitch` is the number of HR pixels spanned by
/// one grid cell (1.0 on the HR grid, 0.25 when 4x supersampled).
class ImageGrid {
 public:
  ImageGrid(int height, int width, double pitch = 1.0, Point2 origin = {});
  ImageGrid(int height, int width, std::vector<double> data,
            double pitch = 1.0, Point2 origin = {});

  int height() const { return height_; }
  int width() const { return width_; }
  GridSize size() const { return {height_, width_}; }
  std::size_t count() const { return data_.size(); }
  double pitch() const { return pitch_; }
  Point2 origin() const { return origin_; }

  double& operator()(int row, int col) {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  double operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  double mean() const;
  double min() const;
  double max() const;
  bool all_finite() const;

  void fill(double value);

  /// Circular read with wrap-around in both axes.
  double wrapped(int row, int col) const;

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  int height_;
  int width_;
  double pitch_;
  Point2 origin_;
  std::vector<double> data_;
};

/// Thrown when two grids that must share geometry do not.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_same_size(const ImageGrid& a, const ImageGrid& b,
                       const char* what);

double dot(const ImageGrid& a, const ImageGrid& b);
double sum_squares(const ImageGrid& a);

/// (a - b) elementwise; sizes must match.
ImageGrid difference(const ImageGrid& a, const ImageGrid& b);

/// Circular translation: out(r, c) = in(r - d_rows, c - d_cols).
ImageGrid circular_shift(const ImageGrid& image, int d_rows, int d_cols);

/// Relative L2 error ||estimate - truth|| / ||truth||.
double relative_l2_error(const ImageGrid& estimate, const ImageGrid& truth);

}  // namespace srlab
