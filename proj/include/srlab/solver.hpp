#pragma once

#include <optional>
#include <span>
#include <vector>

#include "srlab/fft.hpp"
#include "srlab/image_grid.hpp"
#include "srlab/simulator.hpp"

namespace srlab {

struct SolverConfig {
  double lambda = 3.0;
  double alpha = 0.7;
  int P = 2;
  double beta0 = 1.0;
  int max_iters = 200;
  double rel_tol = 1e-5;
  Factor2 sr_factor{1, 2};

  void validate() const;
};

struct SrResult {
  ImageGrid image;
  std::vector<double> cost_trace;
  int iterations_run = 0;
  bool converged = false;
};

/// D M B for one observation, with B and M fused into a single circular
/// transfer function on the HR grid.
class ObservationOperator {
 public:
  ObservationOperator(const Observation& obs, GridSize hr_size);

  GridSize hr_size() const { return hr_size_; }
  GridSize lr_size() const { return lr_size_; }

  ImageGrid apply(const ImageGrid& x) const;
  ImageGrid apply_adjoint(const ImageGrid& r) const;

  /// Forward model from a precomputed spectrum of x.
  ImageGrid apply_spectrum(const fft::Spectrum& x_hat) const;

  /// Accumulates conj(H) * FFT(D^T r) into `acc` (HR spectrum).
  void accumulate_adjoint_spectrum(const ImageGrid& r,
                                   std::vector<fft::Complex>& acc) const;

 private:
  GridSize hr_size_;
  GridSize lr_size_;
  Factor2 decimation_;
  std::vector<fft::Complex> transfer_;
};

/// Noiseless observation of x: circular PSF blur, phase-ramp shift, decimate.
ImageGrid forward_model(const ImageGrid& x, const Observation& obs);

/// Exact transpose of forward_model; r must be LR-sized.
ImageGrid adjoint_model(const ImageGrid& r, const Observation& obs);

/// One (l, m) offset of the bilateral TV window: l columns, m rows.
struct BtvOffset {
  int l = 0;
  int m = 0;
  double weight = 1.0;  // alpha^(|l| + |m|)
};

/// -P <= l <= P, 0 <= m <= P, l + m > 0.
std::vector<BtvOffset> btv_offsets(double alpha, int P);

double btv_penalty(const ImageGrid& x, double alpha, int P);

/// Subgradient of btv_penalty with sign(0) = 0.
ImageGrid btv_gradient(const ImageGrid& x, double alpha, int P);

double cost(const ImageGrid& x, std::span<const Observation> observations,
            const SolverConfig& cfg);

/// Separable Keys cubic (a = -0.5) interpolation of an observation onto its
/// HR grid, circular boundary.
ImageGrid bicubic_upsample(const Observation& obs);

/// Steepest descent on the L2 + BTV cost. `init` empty means bicubic
/// upsample of the first observation.
SrResult super_resolve(std::span<const Observation> observations,
                       const std::optional<ImageGrid>& init,
                       const SolverConfig& cfg);

}  // namespace srlab
