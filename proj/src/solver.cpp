#include "srlab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace srlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxHalvings = 30;

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Wrapped index table: idx[i] = (i - d) mod n.
std::vector<int> wrapped_indices(int n, int d) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = ((i - d) % n + n) % n;
  return idx;
}

double keys_cubic(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return a * (((t - 5.0) * t + 8.0) * t - 4.0);
  return 0.0;
}

// Weights and source indices for cubic resampling of an n-sample circular
// axis at coordinates t_j = (j + shift) / step, j in [0, out_n).
struct CubicAxis {
  std::vector<std::array<int, 4>> idx;
  std::vector<std::array<double, 4>> w;
};

CubicAxis cubic_axis(int n, int out_n, double shift, int step) {
  CubicAxis axis;
  axis.idx.resize(out_n);
  axis.w.resize(out_n);
  for (int j = 0; j < out_n; ++j) {
    const double t = (j + shift) / step;
    const double base = std::floor(t);
    for (int k = 0; k < 4; ++k) {
      const int src = static_cast<int>(base) - 1 + k;
      axis.idx[j][k] = ((src % n) + n) % n;
      axis.w[j][k] = keys_cubic(t - (base - 1 + k));
    }
  }
  return axis;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::runtime_error(std::string("super_resolve: non-finite ") + what);
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("solver: lambda must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("solver: alpha must be in (0, 1]");
  }
  if (P < 1) throw std::invalid_argument("solver: P must be >= 1");
  if (!(beta0 > 0.0)) throw std::invalid_argument("solver: beta0 must be > 0");
  if (max_iters < 0) throw std::invalid_argument("solver: max_iters must be >= 0");
  if (!(rel_tol >= 0.0)) throw std::invalid_argument("solver: rel_tol must be >= 0");
  if (sr_factor.along < 1 || sr_factor.across < 1) {
    throw std::invalid_argument("solver: sr_factor must be >= 1");
  }
}

// --- observation operator -------------------------------------------------

ObservationOperator::ObservationOperator(const Observation& obs,
                                         GridSize hr_size)
    : hr_size_(hr_size),
      lr_size_{obs.image.height(), obs.image.width()},
      decimation_(obs.decimation) {
  if (decimation_.along < 1 || decimation_.across < 1) {
    throw std::invalid_argument("observation: decimation must be >= 1");
  }
  if (hr_size.height != lr_size_.height * decimation_.along ||
      hr_size.width != lr_size_.width * decimation_.across) {
    throw DimensionMismatch("observation geometry does not match HR grid");
  }
  if (!std::isfinite(obs.shift_hr.row) || !std::isfinite(obs.shift_hr.col)) {
    throw std::invalid_argument("observation: non-finite shift");
  }
  transfer_ = kernel_transfer(obs.assumed_psf, hr_size.height, hr_size.width);
  for (int r = 0; r < hr_size.height; ++r) {
    const double fy = fft::bin_frequency(r, hr_size.height);
    for (int c = 0; c < hr_size.width; ++c) {
      const double fx = fft::bin_frequency(c, hr_size.width);
      transfer_[static_cast<std::size_t>(r) * hr_size.width + c] *= std::polar(
          1.0, -2.0 * kPi * (fy * obs.shift_hr.row + fx * obs.shift_hr.col));
    }
  }
}

ImageGrid ObservationOperator::apply_spectrum(const fft::Spectrum& x_hat) const {
  fft::Spectrum s = x_hat;
  for (std::size_t i = 0; i < s.bins.size(); ++i) s.bins[i] *= transfer_[i];
  const ImageGrid full = fft::inverse_real(std::move(s));
  ImageGrid out(lr_size_.height, lr_size_.width);
  for (int r = 0; r < lr_size_.height; ++r) {
    for (int c = 0; c < lr_size_.width; ++c) {
      out(r, c) = full(r * decimation_.along, c * decimation_.across);
    }
  }
  return out;
}

ImageGrid ObservationOperator::apply(const ImageGrid& x) const {
  if (x.size() != hr_size_) {
    throw DimensionMismatch("forward_model: x does not match observation HR grid");
  }
  return apply_spectrum(fft::forward(x));
}

void ObservationOperator::accumulate_adjoint_spectrum(
    const ImageGrid& r, std::vector<fft::Complex>& acc) const {
  if (r.size() != lr_size_) {
    throw DimensionMismatch("adjoint_model: residual does not match LR grid");
  }
  std::vector<fft::Complex> up(
      static_cast<std::size_t>(hr_size_.height) * hr_size_.width);
  for (int i = 0; i < lr_size_.height; ++i) {
    for (int j = 0; j < lr_size_.width; ++j) {
      up[static_cast<std::size_t>(i * decimation_.along) * hr_size_.width +
         j * decimation_.across] = r(i, j);
    }
  }
  fft::transform(up, hr_size_.height, hr_size_.width, -1);
  acc.resize(up.size());
  for (std::size_t k = 0; k < up.size(); ++k) {
    acc[k] += std::conj(transfer_[k]) * up[k];
  }
}

ImageGrid ObservationOperator::apply_adjoint(const ImageGrid& r) const {
  std::vector<fft::Complex> acc(
      static_cast<std::size_t>(hr_size_.height) * hr_size_.width);
  accumulate_adjoint_spectrum(r, acc);
  return fft::inverse_real({hr_size_.height, hr_size_.width, std::move(acc)});
}

ImageGrid forward_model(const ImageGrid& x, const Observation& obs) {
  return ObservationOperator(obs, x.size()).apply(x);
}

ImageGrid adjoint_model(const ImageGrid& r, const Observation& obs) {
  if (r.size() != GridSize{obs.image.height(), obs.image.width()}) {
    throw DimensionMismatch("adjoint_model: residual does not match observation");
  }
  return ObservationOperator(obs, obs.hr_size()).apply_adjoint(r);
}

// --- bilateral TV ----------------------------------------------------------

std::vector<BtvOffset> btv_offsets(double alpha, int P) {
  if (P < 1) throw std::invalid_argument("btv: P must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("btv: alpha must be in (0, 1]");
  }
  std::vector<BtvOffset> out;
  for (int l = -P; l <= P; ++l) {
    for (int m = 0; m <= P; ++m) {
      if (l + m <= 0) continue;
      out.push_back({l, m, std::pow(alpha, std::abs(l) + std::abs(m))});
    }
  }
  return out;
}

double btv_penalty(const ImageGrid& x, double alpha, int P) {
  const int h = x.height();
  const int w = x.width();
  double total = 0.0;
  for (const BtvOffset& o : btv_offsets(alpha, P)) {
    const auto rows = wrapped_indices(h, o.m);
    const auto cols = wrapped_indices(w, o.l);
    double acc = 0.0;
    for (int r = 0; r < h; ++r) {
      const double* src = &x.data()[static_cast<std::size_t>(rows[r]) * w];
      const double* cur = &x.data()[static_cast<std::size_t>(r) * w];
      for (int c = 0; c < w; ++c) acc += std::abs(cur[c] - src[cols[c]]);
    }
    total += o.weight * acc;
  }
  return total;
}

ImageGrid btv_gradient(const ImageGrid& x, double alpha, int P) {
  const int h = x.height();
  const int w = x.width();
  ImageGrid grad(h, w, x.pitch(), x.origin());
  std::vector<double> s(x.count());
  for (const BtvOffset& o : btv_offsets(alpha, P)) {
    const auto rows = wrapped_indices(h, o.m);
    const auto cols = wrapped_indices(w, o.l);
    // s = sign(x - S x)
    for (int r = 0; r < h; ++r) {
      const double* src = &x.data()[static_cast<std::size_t>(rows[r]) * w];
      const double* cur = &x.data()[static_cast<std::size_t>(r) * w];
      double* dst = &s[static_cast<std::size_t>(r) * w];
      for (int c = 0; c < w; ++c) dst[c] = sign(cur[c] - src[cols[c]]);
    }
    // grad += weight * (s - S^{-1} s); (S^{-1} s)(p) = s(p + offset)
    const auto rows_back = wrapped_indices(h, -o.m);
    const auto cols_back = wrapped_indices(w, -o.l);
    for (int r = 0; r < h; ++r) {
      const double* cur = &s[static_cast<std::size_t>(r) * w];
      const double* fwd = &s[static_cast<std::size_t>(rows_back[r]) * w];
      double* g = &grad.data()[static_cast<std::size_t>(r) * w];
      for (int c = 0; c < w; ++c) g[c] += o.weight * (cur[c] - fwd[cols_back[c]]);
    }
  }
  return grad;
}

// --- cost and solver -------------------------------------------------------

double cost(const ImageGrid& x, std::span<const Observation> observations,
            const SolverConfig& cfg) {
  cfg.validate();
  const fft::Spectrum x_hat = fft::forward(x);
  double fidelity = 0.0;
  for (const Observation& obs : observations) {
    const ObservationOperator op(obs, x.size());
    fidelity += sum_squares(difference(obs.image, op.apply_spectrum(x_hat)));
  }
  const double prior = cfg.lambda > 0.0 ? btv_penalty(x, cfg.alpha, cfg.P) : 0.0;
  return fidelity + cfg.lambda * prior;
}

ImageGrid bicubic_upsample(const Observation& obs) {
  const GridSize hr = obs.hr_size();
  const int h = obs.image.height();
  const int w = obs.image.width();
  // LR sample j sits at HR coordinate j*s - d.
  const CubicAxis ax_rows =
      cubic_axis(h, hr.height, obs.shift_hr.row, obs.decimation.along);
  const CubicAxis ax_cols =
      cubic_axis(w, hr.width, obs.shift_hr.col, obs.decimation.across);

  ImageGrid tmp(h, hr.width);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < hr.width; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += ax_cols.w[c][k] * obs.image(r, ax_cols.idx[c][k]);
      tmp(r, c) = acc;
    }
  }
  ImageGrid out(hr.height, hr.width);
  for (int r = 0; r < hr.height; ++r) {
    for (int c = 0; c < hr.width; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += ax_rows.w[r][k] * tmp(ax_rows.idx[r][k], c);
      out(r, c) = acc;
    }
  }
  return out;
}

SrResult super_resolve(std::span<const Observation> observations,
                       const std::optional<ImageGrid>& init,
                       const SolverConfig& cfg) {
  cfg.validate();
  if (observations.empty()) {
    throw std::invalid_argument("super_resolve: need at least one observation");
  }
  const Factor2 dec = observations.front().decimation;
  for (const Observation& obs : observations) {
    if (obs.decimation != dec) {
      throw std::invalid_argument("super_resolve: observations disagree on decimation");
    }
  }
  if (dec != cfg.sr_factor) {
    throw std::invalid_argument("super_resolve: sr_factor does not match observations");
  }

  ImageGrid x = init ? *init : bicubic_upsample(observations.front());
  const GridSize hr = observations.front().hr_size();
  if (x.size() != hr) throw DimensionMismatch("super_resolve: init size");

  std::vector<ObservationOperator> ops;
  ops.reserve(observations.size());
  for (const Observation& obs : observations) ops.emplace_back(obs, hr);

  auto prior = [&](const ImageGrid& img) {
    return cfg.lambda > 0.0 ? cfg.lambda * btv_penalty(img, cfg.alpha, cfg.P) : 0.0;
  };

  // Residuals r_k = y_k - A_k x are carried forward by linearity.
  std::vector<ImageGrid> residuals;
  {
    const fft::Spectrum x_hat = fft::forward(x);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      residuals.push_back(
          difference(observations[k].image, ops[k].apply_spectrum(x_hat)));
    }
  }
  auto fidelity = [](const std::vector<ImageGrid>& rs) {
    double f = 0.0;
    for (const ImageGrid& r : rs) f += sum_squares(r);  // fixed order
    return f;
  };

  double current = fidelity(residuals) + prior(x);
  require_finite(current, "initial cost");

  SrResult result{x, {current}, 0, false};
  double beta = cfg.beta0;
  const std::size_t n = x.count();

  for (int it = 0; it < cfg.max_iters; ++it) {
    // g = -2 sum_k A_k^T r_k + lambda * btv_grad(x)
    std::vector<fft::Complex> acc(n);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      ops[k].accumulate_adjoint_spectrum(residuals[k], acc);
    }
    ImageGrid grad = fft::inverse_real({hr.height, hr.width, std::move(acc)});
    for (double& v : grad.data()) v *= -2.0;
    if (cfg.lambda > 0.0) {
      const ImageGrid g_prior = btv_gradient(x, cfg.alpha, cfg.P);
      auto gd = grad.data();
      auto pd = g_prior.data();
      for (std::size_t i = 0; i < n; ++i) gd[i] += cfg.lambda * pd[i];
    }

    std::vector<ImageGrid> a_grad;
    {
      const fft::Spectrum g_hat = fft::forward(grad);
      for (const auto& op : ops) a_grad.push_back(op.apply_spectrum(g_hat));
    }

    bool accepted = false;
    ImageGrid trial = x;
    std::vector<ImageGrid> trial_res = residuals;
    double trial_cost = current;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      auto td = trial.data();
      auto xd = x.data();
      auto gd = grad.data();
      for (std::size_t i = 0; i < n; ++i) td[i] = xd[i] - beta * gd[i];
      for (std::size_t k = 0; k < ops.size(); ++k) {
        auto rd = trial_res[k].data();
        auto r0 = residuals[k].data();
        auto ag = a_grad[k].data();
        for (std::size_t i = 0; i < rd.size(); ++i) rd[i] = r0[i] + beta * ag[i];
      }
      trial_cost = fidelity(trial_res) + prior(trial);
      require_finite(trial_cost, "cost");
      if (trial_cost < current) {
        accepted = true;
        break;
      }
      beta *= 0.5;
    }
    if (!accepted) {
      result.converged = true;
      break;
    }

    const double decrease = current > 0.0 ? (current - trial_cost) / current : 0.0;
    x = std::move(trial);
    residuals = std::move(trial_res);
    current = trial_cost;
    result.cost_trace.push_back(current);
    result.iterations_run = it + 1;
    beta = std::min(beta * 1.2, cfg.beta0);
    if (decrease < cfg.rel_tol) {
      result.converged = true;
      break;
    }
  }

  result.image = std::move(x);
  return result;
}

}  // namespace srlab
