#include "semidisp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace semidisp {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftWorkspace::FftWorkspace(std::vector<int> shape) : shape_(std::move(shape)) {
  size_ = 1;
  for (int g : shape_) size_ *= static_cast<std::size_t>(g);
  data_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * size_));
  if (!data_) throw std::bad_alloc();
  auto* buf = reinterpret_cast<fftw_complex*>(data_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  const int rank = static_cast<int>(shape_.size());
  fwd_ = fftw_plan_dft(rank, shape_.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft(rank, shape_.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("fftw planning failed");
}

FftWorkspace::~FftWorkspace() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(data_);
}

void FftWorkspace::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void FftWorkspace::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

FftWorkspace& workspace_for(const std::vector<int>& shape) {
  thread_local std::map<std::vector<int>, std::unique_ptr<FftWorkspace>> cache;
  auto it = cache.find(shape);
  if (it != cache.end()) return *it->second;
  if (cache.size() >= 4) cache.clear();
  auto res = cache.emplace(shape, std::make_unique<FftWorkspace>(shape));
  return *res.first->second;
}

void separable_product(std::complex<double>* dst, const std::complex<double>* src,
                       const std::vector<int>& shape, const std::vector<Eigen::ArrayXcd>& factors) {
  const int r = static_cast<int>(shape.size());
  const int inner = shape[r - 1];
  std::size_t outer = 1;
  for (int a = 0; a < r - 1; ++a) outer *= shape[a];
  const std::complex<double>* fin = factors[r - 1].data();
  std::vector<int> idx(r, 0);
  for (std::size_t o = 0; o < outer; ++o) {
    std::complex<double> c = 1.0;
    for (int a = 0; a < r - 1; ++a) c *= factors[a][idx[a]];
    const std::complex<double>* s = src + o * inner;
    std::complex<double>* t = dst + o * inner;
    if (c == 0.0) {
      for (int i = 0; i < inner; ++i) t[i] = 0.0;
    } else {
      for (int i = 0; i < inner; ++i) t[i] = s[i] * (c * fin[i]);
    }
    for (int a = r - 2; a >= 0; --a) {
      if (++idx[a] < shape[a]) break;
      idx[a] = 0;
    }
  }
}

Eigen::ArrayXd real_convolve(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  const int out = static_cast<int>(a.size() + b.size() - 1);
  int g = 1;
  while (g < out) g *= 2;
  FftWorkspace& wa = workspace_for({g});
  Eigen::ArrayXcd fa = Eigen::ArrayXcd::Zero(g);
  fa.head(a.size()) = a.cast<std::complex<double>>();
  wa.array() = fa;
  wa.forward();
  fa = wa.array();
  Eigen::ArrayXcd fb = Eigen::ArrayXcd::Zero(g);
  fb.head(b.size()) = b.cast<std::complex<double>>();
  wa.array() = fb;
  wa.forward();
  wa.array() *= fa;
  wa.backward();
  return wa.array().head(out).real() / g;
}

}  // namespace semidisp
