#include "srlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace srlab::fft {
namespace {

// FFTW planning is not thread-safe; execution on a finished plan is. Plans are
// created in place and unaligned so any buffer of the right size can reuse one.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<Complex> scratch(static_cast<std::size_t>(rows) * cols);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan =
        fftw_plan_dft_2d(rows, cols, buf, buf,
                         sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

}  // namespace

void transform(std::vector<Complex>& data, int rows, int cols, int sign) {
  fftw_plan plan = PlanCache::instance().get(rows, cols, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

Spectrum forward(const ImageGrid& image) {
  Spectrum s{image.height(), image.width(), {}};
  s.bins.assign(image.data().begin(), image.data().end());
  transform(s.bins, s.rows, s.cols, -1);
  return s;
}

ImageGrid inverse_real(Spectrum spectrum, double pitch, Point2 origin) {
  transform(spectrum.bins, spectrum.rows, spectrum.cols, +1);
  const double scale = 1.0 / static_cast<double>(spectrum.bins.size());
  ImageGrid out(spectrum.rows, spectrum.cols, pitch, origin);
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = spectrum.bins[i].real() * scale;
  }
  return out;
}

}  // namespace srlab::fft
