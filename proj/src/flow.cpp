#include "semidisp/flow.hpp"

#include <cmath>

#include "semidisp/fft.hpp"
#include "semidisp/propagator.hpp"

namespace semidisp {

FreeFlow::FreeFlow(SpectralField u0) : u0_(std::move(u0)) {
  const Domain& dom = *u0_.domain;
  const auto shape = dom.shape();
  for (int a = 0; a < dom.rank(); ++a) {
    const int g = shape[a];
    Eigen::ArrayXcd v(g);
    if (dom.is_euclid_axis(a)) {
      const double w = 1.0 / dom.box_lengths[a - dom.d];
      for (int i = 0; i < g; ++i) v[i] = (i % 2 == 0) ? w : -w;
    } else {
      v.setOnes();
    }
    transform_.push_back(std::move(v));
  }
  symmetric_ = is_real_spectrum(u0_);
}

Field FreeFlow::at(double t) const { return from_spectral(evolve(u0_, t)); }

double FreeFlow::lp_pow(double t, double p) const {
  const Domain& dom = *u0_.domain;
  FftWorkspace& ws = workspace_for(dom.shape());
  auto f = evolution_factors(dom, t);
  for (std::size_t a = 0; a < f.size(); ++a) f[a] *= transform_[a];
  separable_product(ws.data(), u0_.coeffs.data(), ws.shape(), f);
  ws.backward();
  ++evaluations_;
  const Eigen::Map<Eigen::ArrayXcd> u = ws.array();
  const double cell = dom.cell_volume();
  if (std::isinf(p)) return u.abs().maxCoeff();
  const Eigen::ArrayXd a2 = u.abs2();
  if (p == 2.0) return a2.sum() * cell;
  if (p == 4.0) return a2.square().sum() * cell;
  if (p == 6.0) return a2.cube().sum() * cell;
  return a2.pow(p / 2.0).sum() * cell;
}

double FreeFlow::unit_integral(long u, int spu, double p) {
  if (symmetric_ && u < 0) u = -u - 1;
  const auto key = std::make_tuple(u, spu, p);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  double acc = 0.0;
  for (int j = 0; j < spu; ++j) {
    const double s = lp_pow(u + (j + 0.5) / spu, p);
    acc = std::isinf(p) ? std::max(acc, s) : acc + s;
  }
  const double v = std::isinf(p) ? acc : acc / spu;
  memo_.emplace(key, v);
  return v;
}

double window_lp_norm(FreeFlow& flow, double p, const WindowGrid& grid, int gamma) {
  grid.validate();
  if (grid.kind == WindowKind::disjoint) {
    const double v = flow.unit_integral(gamma, grid.samples_per_window, p);
    return std::isinf(p) ? v : std::pow(v, 1.0 / p);
  }
  const int spu = grid.samples_per_window / 2;
  const double a = flow.unit_integral(gamma - 1, spu, p);
  const double b = flow.unit_integral(gamma, spu, p);
  return std::isinf(p) ? std::max(a, b) : std::pow(a + b, 1.0 / p);
}

MixedNorm mixed_norm(FreeFlow& flow, double p, double q, const WindowGrid& grid) {
  std::vector<int> gammas;
  std::vector<double> norms;
  for (int g = -grid.gamma_max; g <= grid.gamma_max; ++g) {
    gammas.push_back(g);
    norms.push_back(window_lp_norm(flow, p, grid, g));
  }
  return combine_windows(std::move(gammas), std::move(norms), q);
}

int resolved_samples(const SpectralField& u0, double window_length, int floor) {
  const double need = 2.0 * dispersion_spread(u0) * window_length;
  int n = std::max(floor, static_cast<int>(std::ceil(need)));
  if (n % 2) ++n;
  return n;
}

}  // namespace semidisp
