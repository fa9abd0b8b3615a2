#include "srlab/image_grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace srlab {

ImageGrid::ImageGrid(int height, int width, double pitch, Point2 origin)
    : ImageGrid(height, width,
                std::vector<double>(height > 0 && width > 0
                                        ? static_cast<std::size_t>(height) * width
                                        : 0),
                pitch, origin) {}

ImageGrid::ImageGrid(int height, int width, std::vector<double> data,
                     double pitch, Point2 origin)
    : height_(height),
      width_(width),
      pitch_(pitch),
      origin_(origin),
      data_(std::move(data)) {
  if (height < 2 || width < 2) {
    throw std::invalid_argument("ImageGrid: width and height must be >= 2");
  }
  if (!(pitch > 0.0) || !std::isfinite(pitch)) {
    throw std::invalid_argument("ImageGrid: pitch must be finite and > 0");
  }
  if (data_.size() != static_cast<std::size_t>(height) * width) {
    throw std::invalid_argument("ImageGrid: data length != width * height");
  }
}

double ImageGrid::mean() const {
  return std::accumulate(data_.begin(), data_.end(), 0.0) /
         static_cast<double>(data_.size());
}

double ImageGrid::min() const {
  return *std::min_element(data_.begin(), data_.end());
}

double ImageGrid::max() const {
  return *std::max_element(data_.begin(), data_.end());
}

bool ImageGrid::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void ImageGrid::fill(double value) {
  std::fill(data_.begin(), data_.end(), value);
}

double ImageGrid::wrapped(int row, int col) const {
  row %= height_;
  col %= width_;
  if (row < 0) row += height_;
  if (col < 0) col += width_;
  return (*this)(row, col);
}

void require_same_size(const ImageGrid& a, const ImageGrid& b,
                       const char* what) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(what) + ": " +
                            std::to_string(a.height()) + "x" +
                            std::to_string(a.width()) + " vs " +
                            std::to_string(b.height()) + "x" +
                            std::to_string(b.width()));
  }
}

double dot(const ImageGrid& a, const ImageGrid& b) {
  require_same_size(a, b, "dot");
  return std::inner_product(a.data().begin(), a.data().end(),
                            b.data().begin(), 0.0);
}

double sum_squares(const ImageGrid& a) { return dot(a, a); }

ImageGrid difference(const ImageGrid& a, const ImageGrid& b) {
  require_same_size(a, b, "difference");
  ImageGrid out(a.height(), a.width(), a.pitch(), a.origin());
  std::transform(a.data().begin(), a.data().end(), b.data().begin(),
                 out.data().begin(), std::minus<>());
  return out;
}

ImageGrid circular_shift(const ImageGrid& image, int d_rows, int d_cols) {
  ImageGrid out(image.height(), image.width(), image.pitch(), image.origin());
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      out(r, c) = image.wrapped(r - d_rows, c - d_cols);
    }
  }
  return out;
}

double relative_l2_error(const ImageGrid& estimate, const ImageGrid& truth) {
  const double denom = std::sqrt(sum_squares(truth));
  return std::sqrt(sum_squares(difference(estimate, truth))) /
         (denom > 0.0 ? denom : 1.0);
}

}  // namespace srlab
