#include "srlab/metrology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "srlab/target.hpp"

namespace srlab {
namespace {

constexpr double kPi = std::numbers::pi;

// Solves the symmetric 3x3 system A v = b by Gaussian elimination with
// partial pivoting. Returns false when singular.
bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b,
            std::array<double, 3>& v) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      const double k = a[r][col] / a[col][col];
      for (int c = col; c < 3; ++c) a[r][c] -= k * a[col][c];
      b[r] -= k * b[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= a[r][c] * v[c];
    v[r] = s / a[r][r];
  }
  return true;
}

}  // namespace

double pixel_angle(double x, double y) {
  if (x == 0.0 && y == 0.0) {
    throw std::invalid_argument("pixel_angle: undefined at the star center");
  }
  double a = std::atan2(x, y);
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a = 0.0;
  return a;
}

RingFit ring_modulation(const ImageGrid& image, Point2 center, double radius,
                        int cycles, const ImageGrid* mask,
                        const RingOptions& options) {
  if (cycles < 1) throw std::invalid_argument("ring_modulation: cycles < 1");
  if (!(radius >= 2.0)) throw std::invalid_argument("ring_modulation: radius < 2");
  if (mask != nullptr) require_same_size(image, *mask, "ring_modulation mask");

  const double lo = radius - 0.5;
  const double hi = radius + 0.5;
  if (center.row - hi < 0.0 || center.col - hi < 0.0 ||
      center.row + hi > image.height() - 1 || center.col + hi > image.width() - 1) {
    throw MeasurementError("empty ring: annulus leaves the image");
  }
  const double per_cycle = 2.0 * kPi * radius / cycles;
  if (per_cycle < options.min_samples_per_cycle) {
    throw MeasurementError("aliased ring: too few samples per cycle");
  }

  // Normal equations of I = a + b cos(N alpha) + c sin(N alpha).
  std::array<std::array<double, 3>, 3> ata{};
  std::array<double, 3> atb{};
  int n = 0;
  const int r0 = static_cast<int>(std::floor(center.row - hi));
  const int r1 = static_cast<int>(std::ceil(center.row + hi));
  const int c0 = static_cast<int>(std::floor(center.col - hi));
  const int c1 = static_cast<int>(std::ceil(center.col + hi));
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      const double y = row - center.row;
      const double x = col - center.col;
      const double rho = std::hypot(x, y);
      if (rho < lo || rho >= hi) continue;
      if (mask != nullptr && (*mask)(row, col) < 0.5) continue;
      const double phase = cycles * pixel_angle(x, y);
      const std::array<double, 3> basis{1.0, std::cos(phase), std::sin(phase)};
      const double v = image(row, col);
      for (int i = 0; i < 3; ++i) {
        atb[i] += basis[i] * v;
        for (int j = 0; j < 3; ++j) ata[i][j] += basis[i] * basis[j];
      }
      ++n;
    }
  }
  if (n < 8) throw MeasurementError("empty ring: fewer than 8 samples");

  std::array<double, 3> coef{};
  if (!solve3(ata, atb, coef)) {
    throw MeasurementError("aliased ring: harmonic not identifiable");
  }
  RingFit fit;
  fit.radius = radius;
  fit.g = per_cycle;
  fit.f = 1.0 / per_cycle;
  fit.a = coef[0];
  fit.beta_amp = std::hypot(coef[1], coef[2]);
  fit.alpha0 = std::atan2(coef[2], coef[1]) / cycles;
  fit.M = fit.a > 0.0 ? fit.beta_amp / fit.a : 0.0;
  fit.samples = n;
  fit.exceeds_unity = fit.M > 1.0;
  return fit;
}

MtfCurve mtf_curve(const ImageGrid& image, Point2 center, int cycles,
                   const std::vector<double>& radii, const ImageGrid* mask,
                   const RingOptions& options) {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] < radii[i - 1])) {
      throw std::invalid_argument("mtf_curve: radii must be strictly decreasing");
    }
  }
  MtfCurve curve;
  for (double r : radii) {
    try {
      const RingFit fit = ring_modulation(image, center, r, cycles, mask, options);
      curve.points.push_back({fit.f, fit.M});
    } catch (const MeasurementError& e) {
      if (std::string(e.what()).rfind("aliased", 0) != 0) throw;
      ++curve.dropped;
    }
  }
  if (curve.points.size() < 3) {
    throw MeasurementError("insufficient curve: fewer than 3 valid rings");
  }
  std::sort(curve.points.begin(), curve.points.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.f < b.f; });
  return curve;
}

double nem(double signal, double noise_sigma) {
  if (!(signal > 0.0)) throw std::invalid_argument("nem: signal must be > 0");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("nem: noise_sigma < 0");
  return 4.0 * noise_sigma / signal;
}

Crossing crossing_frequency(const std::vector<CurvePoint>& curve, double nem) {
  Crossing out;
  if (curve.empty()) return out;
  if (curve.front().M <= nem) {
    out.f = curve.front().f;
    out.degenerate = true;
    return out;
  }
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const CurvePoint& p = curve[i];
    const CurvePoint& q = curve[i + 1];
    if (p.M > nem && q.M <= nem) {
      out.f = p.f + (q.f - p.f) * (p.M - nem) / (p.M - q.M);
      return out;
    }
  }
  return out;
}

double frequency_to_resolution(double f, double pitch,
                               const GeometryConstants& geo) {
  if (!(f > 0.0)) {
    throw std::invalid_argument("frequency_to_resolution: f must be > 0");
  }
  return geo.hr_gsd_m * geo.f_nyq_hr * pitch / f;
}

std::vector<double> radius_ladder(const StarSpec& star,
                                  const MeasureOptions& options) {
  if (options.rings < 3) throw std::invalid_argument("radius_ladder: rings < 3");
  const double r_max = star.outer_radius - options.edge_margin;
  const double r_alias =
      options.ring.min_samples_per_cycle * star.cycles / (2.0 * kPi);
  const double r_min = std::max({r_alias, star.inner_radius + 1.0, 2.0});
  if (!(r_min < r_max)) {
    throw MeasurementError("insufficient curve: star too small for a ladder");
  }
  std::vector<double> radii(options.rings);
  const double ratio = std::pow(r_min / r_max, 1.0 / (options.rings - 1));
  for (int i = 0; i < options.rings; ++i) radii[i] = r_max * std::pow(ratio, i);
  radii.back() = r_min;
  return radii;
}

ResolutionReport measure_resolution(const ImageGrid& image,
                                    const StarSpec& star, double signal,
                                    double noise_sigma, std::optional<int> sector,
                                    int sector_count,
                                    const MeasureOptions& options) {
  std::optional<ImageGrid> mask;
  if (sector) mask = sector_mask(image.size(), star.center, *sector, sector_count);

  const MtfCurve curve =
      mtf_curve(image, star.center, star.cycles, radius_ladder(star, options),
                mask ? &*mask : nullptr, options.ring);

  ResolutionReport report;
  report.curve = curve.points;
  report.dropped_rings = curve.dropped;
  report.sector = sector;
  report.nem = nem(signal, noise_sigma);

  const Crossing crossing = crossing_frequency(report.curve, report.nem);
  report.degenerate = crossing.degenerate;
  if (crossing.f) {
    report.f_cross = crossing.f;
  } else {
    report.f_cross = report.curve.back().f;
    report.limited_by_ladder = true;
  }
  report.resolution_m = frequency_to_resolution(*report.f_cross, image.pitch());
  return report;
}

}  // namespace srlab
