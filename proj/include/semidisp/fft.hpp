#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace semidisp {

// In-place multidimensional complex FFT on an owned, aligned buffer.
// Plans use FFTW_ESTIMATE so results do not depend on timing measurements.
class FftWorkspace {
 public:
  explicit FftWorkspace(std::vector<int> shape);
  ~FftWorkspace();
  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;

  std::complex<double>* data() { return data_; }
  std::size_t size() const { return size_; }
  const std::vector<int>& shape() const { return shape_; }
  Eigen::Map<Eigen::ArrayXcd> array() {
    return Eigen::Map<Eigen::ArrayXcd>(data_, static_cast<Eigen::Index>(size_));
  }

  void forward();   // sum f e^{-2 pi i k.j/g}
  void backward();  // sum f e^{+2 pi i k.j/g}, unnormalized

 private:
  std::vector<int> shape_;
  std::size_t size_ = 0;
  std::complex<double>* data_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

// Per-thread cached workspace for a shape.
FftWorkspace& workspace_for(const std::vector<int>& shape);

// dst[idx] = src[idx] * prod_a factors[a][idx_a], row-major over `shape`.
void separable_product(std::complex<double>* dst, const std::complex<double>* src,
                       const std::vector<int>& shape, const std::vector<Eigen::ArrayXcd>& factors);

// 1-d linear convolution helper used by the HLS sums.
Eigen::ArrayXd real_convolve(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b);

}  // namespace semidisp
