#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "semidisp/norms.hpp"
#include "semidisp/spectral.hpp"

namespace semidisp {

// Free linear evolution S(t)u0 sampled lazily. Spatial L^p sums are memoized on
// unit time intervals so overlapping windows share samples.
class FreeFlow {
 public:
  explicit FreeFlow(SpectralField u0);

  const SpectralField& initial() const { return u0_; }
  // real coefficients give |u(-t)| = |u(t)| reflected in space
  bool time_symmetric() const { return symmetric_; }

  Field at(double t) const;
  // sum_x |u(t)|^p * cell, or sup |u(t)| for infinite p
  double lp_pow(double t, double p) const;
  // mean of lp_pow over spu midpoint samples of [u, u+1)
  double unit_integral(long u, int spu, double p);

  long evaluations() const { return evaluations_; }

 private:
  SpectralField u0_;
  std::vector<Eigen::ArrayXcd> transform_;
  bool symmetric_ = false;
  mutable long evaluations_ = 0;
  std::map<std::tuple<long, int, double>, double> memo_;
};

double window_lp_norm(FreeFlow& flow, double p, const WindowGrid& grid, int gamma);
MixedNorm mixed_norm(FreeFlow& flow, double p, double q, const WindowGrid& grid);

// samples per window for a band-limited flow: at least `floor`, and at least
// 2 * spread * window length so the |u|^p oscillation is resolved; always even
int resolved_samples(const SpectralField& u0, double window_length, int floor);

}  // namespace semidisp
