#include "semidisp/norms.hpp"

#include <cmath>
#include <limits>

#include "semidisp/domain.hpp"
#include "semidisp/fft.hpp"

namespace semidisp {

ExponentSet exponent_table(int n, int d, double p) {
  if (!(p > 2.0)) throw ValidationError("p", "must be greater than 2");
  if (n < 0 || d < 0 || n + d < 1) throw ValidationError("n", "n + d must be at least 1");
  ExponentSet e;
  e.n = n;
  e.d = d;
  e.p = p;
  const double nd = n + d;
  e.p_star = 2.0 * (nd + 2.0) / nd;
  e.q = n > 0 ? 4.0 * p / (n * (p - 2.0)) : std::numeric_limits<double>::infinity();
  e.q_adm = e.q;
  e.alpha = nd / 2.0 - (nd + 2.0) / p;
  e.mu = n * (p - 2.0) / (2.0 * p);
  e.above_endpoint = p >= e.p_star * (1.0 - 1e-12);
  e.q_above_two = e.q > 2.0;
  return e;
}

double lp_pow_sum(const Eigen::ArrayXcd& values, double p, double cell) {
  if (std::isinf(p)) return values.abs().maxCoeff();
  const Eigen::ArrayXd a2 = values.abs2();
  if (p == 2.0) return a2.sum() * cell;
  if (p == 4.0) return a2.square().sum() * cell;
  if (p == 6.0) return a2.cube().sum() * cell;
  return a2.pow(p / 2.0).sum() * cell;
}

double lp_space_norm(const Field& field, double p) {
  const double s = lp_pow_sum(field.values, p, field.domain->cell_volume());
  return std::isinf(p) ? s : std::pow(s, 1.0 / p);
}

void WindowGrid::validate() const {
  if (gamma_max < 0) throw ValidationError("gamma_max", "must be non-negative");
  if (samples_per_window < 8) throw ValidationError("samples_per_window", "must be at least 8");
  if (kind == WindowKind::overlapping && samples_per_window % 2 != 0)
    throw ValidationError("samples_per_window", "must be even for overlapping windows");
}

double window_lp_norm(const Trajectory& traj, double p, double a, double b, int n_t) {
  double acc = 0.0;
  int count = 0;
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    if (t <= a || t >= b) continue;
    const Field& u = traj.fields[j];
    const double s = lp_pow_sum(u.values, p, u.domain->cell_volume());
    acc = std::isinf(p) ? std::max(acc, s) : acc + s;
    ++count;
  }
  if (count < n_t)
    throw InsufficientSampling("window [" + std::to_string(a) + ", " + std::to_string(b) + "] has " +
                               std::to_string(count) + " samples, need " + std::to_string(n_t));
  if (std::isinf(p)) return acc;
  return std::pow(acc * (b - a) / count, 1.0 / p);
}

MixedNorm combine_windows(std::vector<int> gammas, std::vector<double> norms, double q) {
  MixedNorm m;
  double total = 0.0;
  double outer = 0.0;
  int gmax = 0;
  for (int g : gammas) gmax = std::max(gmax, std::abs(g));
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double c = std::isinf(q) ? norms[i] : std::pow(norms[i], q);
    total = std::isinf(q) ? std::max(total, c) : total + c;
    if (std::abs(gammas[i]) == gmax && gmax > 0) outer = std::isinf(q) ? std::max(outer, c) : outer + c;
  }
  m.value = std::isinf(q) ? total : std::pow(total, 1.0 / q);
  m.tail_flag = total > 0 && outer > 1e-6 * total;
  m.gammas = std::move(gammas);
  m.window_norms = std::move(norms);
  return m;
}

MixedNorm mixed_norm(const Trajectory& traj, double p, double q, const WindowGrid& grid) {
  grid.validate();
  std::vector<int> gammas;
  std::vector<double> norms;
  for (int g = -grid.gamma_max; g <= grid.gamma_max; ++g) {
    auto [a, b] = grid.window(g);
    gammas.push_back(g);
    norms.push_back(window_lp_norm(traj, p, a, b, grid.samples_per_window));
  }
  return combine_windows(std::move(gammas), std::move(norms), q);
}

double discrete_hls_sum_direct(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double mu) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j)
    for (Eigen::Index k = 0; k < b.size(); ++k)
      if (j != k) s += a[j] * b[k] * std::pow(std::abs(double(j - k)), -mu);
  return s;
}

double discrete_hls_sum(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw ValidationError("mu", "must lie in (0, 1)");
  const Eigen::Index n = std::max(a.size(), b.size());
  if (n <= 256) return discrete_hls_sum_direct(a, b, mu);
  Eigen::ArrayXd kernel(2 * n - 1);
  for (Eigen::Index r = -(n - 1); r <= n - 1; ++r)
    kernel[r + n - 1] = r == 0 ? 0.0 : std::pow(std::abs(double(r)), -mu);
  const Eigen::ArrayXd conv = real_convolve(b, kernel);
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) s += a[j] * conv[j + n - 1];
  return s;
}

double discrete_hls_ratio(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double mu, double p,
                          double q) {
  if (std::abs(1.0 / p + 1.0 / q + mu - 2.0) > 1e-12)
    throw ValidationError("mu", "exponents must satisfy 1/p + 1/q + mu = 2");
  return discrete_hls_sum(a, b, mu) / (lp_sequence_norm(a, p) * lp_sequence_norm(b, q));
}

}  // namespace semidisp
