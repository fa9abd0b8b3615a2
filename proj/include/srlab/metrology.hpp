#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "srlab/image_grid.hpp"
#include "srlab/mtf.hpp"
#include "srlab/target.hpp"

namespace srlab {

/// Measurement refused: "aliased ring", "empty ring" or "insufficient curve".
class MeasurementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// atan2(x, y) mapped to [0, 2pi). Throws at the origin.
double pixel_angle(double x, double y);

/// Single-harmonic fit I(a) = mean + beta_amp cos(cycles (a - alpha0)) of one
/// annulus. g and f are in grid pixels.
struct RingFit {
  double radius = 0.0;
  double g = 0.0;
  double f = 0.0;
  double a = 0.0;
  double beta_amp = 0.0;
  double alpha0 = 0.0;
  double M = 0.0;
  int samples = 0;
  bool exceeds_unity = false;
};

struct RingOptions {
  /// Annulus circumference per spoke cycle below which the ring is refused.
  double min_samples_per_cycle = 2.0;
};

RingFit ring_modulation(const ImageGrid& image, Point2 center, double radius,
                        int cycles, const ImageGrid* mask = nullptr,
                        const RingOptions& options = {});

struct CurvePoint {
  double f = 0.0;
  double M = 0.0;
};

struct MtfCurve {
  std::vector<CurvePoint> points;  // ascending f
  int dropped = 0;                 // rings refused as aliased
};

/// Rings at `radii` (strictly decreasing), sorted by ascending f.
MtfCurve mtf_curve(const ImageGrid& image, Point2 center, int cycles,
                   const std::vector<double>& radii,
                   const ImageGrid* mask = nullptr,
                   const RingOptions& options = {});

/// Noise-equivalent modulation 4 n / s.
double nem(double signal, double noise_sigma);

struct Crossing {
  std::optional<double> f;
  /// Curve already at or below nem at its first point.
  bool degenerate = false;
};

Crossing crossing_frequency(const std::vector<CurvePoint>& curve, double nem);

/// Ground resolution (m) of a frequency in cycles per grid pixel; `pitch` is
/// HR pixels per grid pixel.
double frequency_to_resolution(double f, double pitch = 1.0,
                               const GeometryConstants& geo = kGeometry);

struct MeasureOptions {
  int rings = 40;
  /// Outermost ring sits this far inside the star edge.
  double edge_margin = 1.0;
  RingOptions ring{};
};

/// Geometric radius ladder from just inside the outer edge down to the
/// aliasing limit (or the dead zone), outermost first.
std::vector<double> radius_ladder(const StarSpec& star,
                                  const MeasureOptions& options = {});

struct ResolutionReport {
  std::vector<CurvePoint> curve;
  double nem = 0.0;
  std::optional<double> f_cross;
  std::optional<double> resolution_m;
  std::optional<int> sector;
  bool degenerate = false;
  /// No crossing inside the ladder; f_cross is the ladder's highest frequency
  /// and the resolution is a bound.
  bool limited_by_ladder = false;
  int dropped_rings = 0;
};

ResolutionReport measure_resolution(const ImageGrid& image,
                                    const StarSpec& star, double signal,
                                    double noise_sigma,
                                    std::optional<int> sector = std::nullopt,
                                    int sector_count = 8,
                                    const MeasureOptions& options = {});

}  // namespace srlab
