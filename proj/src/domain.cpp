#include "semidisp/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semidisp {

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

std::size_t Domain::size() const {
  std::size_t s = 1;
  for (int g : grid_sizes) s *= static_cast<std::size_t>(g);
  return s;
}

std::vector<int> Domain::shape() const {
  std::vector<int> s;
  s.reserve(n + d);
  for (int j = 0; j < d; ++j) s.push_back(grid_sizes[n + j]);
  for (int i = 0; i < n; ++i) s.push_back(grid_sizes[i]);
  return s;
}

double Domain::cell_volume() const {
  double c = 1.0;
  for (int i = 0; i < n; ++i) c *= box_lengths[i] / grid_sizes[i];
  for (int j = 0; j < d; ++j) c /= grid_sizes[n + j];
  return c;
}

double Domain::spectral_cell() const {
  double c = 1.0;
  for (int i = 0; i < n; ++i) c /= box_lengths[i];
  return c;
}

double Domain::volume() const {
  double v = 1.0;
  for (double L : box_lengths) v *= L;
  return v;
}

double Domain::max_frequency(int a) const {
  if (is_euclid_axis(a)) {
    int i = a - d;
    return (grid_sizes[i] / 2) / box_lengths[i];
  }
  return torus_weights[a] * (grid_sizes[n + a] / 2);
}

DomainPtr build_domain(int n, int d, std::vector<double> box_lengths,
                       std::vector<double> torus_weights, std::vector<int> grid_sizes) {
  if (n < 0 || d < 0 || n + d < 1) throw ValidationError("domain", "n + d must be at least 1");
  if (static_cast<int>(box_lengths.size()) != n)
    throw ValidationError("box_lengths", "expected " + std::to_string(n) + " entries");
  if (static_cast<int>(torus_weights.size()) != d)
    throw ValidationError("torus_weights", "expected " + std::to_string(d) + " entries");
  if (static_cast<int>(grid_sizes.size()) != n + d)
    throw ValidationError("grid_sizes", "expected " + std::to_string(n + d) + " entries");
  for (double L : box_lengths)
    if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("box_lengths", "lengths must be positive");
  for (double b : torus_weights)
    if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("torus_weights", "weights must be positive");
  for (int g : grid_sizes) {
    if (!is_power_of_two(g)) throw ValidationError("grid_sizes", "grid size must be power of two");
    if (g < 4) throw ValidationError("grid_sizes", "grid size must be at least 4");
  }

  auto dom = std::make_shared<Domain>();
  dom->n = n;
  dom->d = d;
  dom->box_lengths = std::move(box_lengths);
  dom->torus_weights = std::move(torus_weights);
  dom->grid_sizes = std::move(grid_sizes);

  FrequencyLattice& lat = dom->lattice;
  const auto shape = dom->shape();
  lat.axis_dispersion.resize(n + d);
  for (int j = 0; j < d; ++j) {
    int g = shape[j];
    Eigen::ArrayXi m(g);
    for (int i = 0; i < g; ++i) m[i] = signed_index(i, g);
    double b2 = dom->torus_weights[j] * dom->torus_weights[j];
    lat.axis_dispersion[j] = b2 * m.cast<double>().square();
    lat.torus_freqs.push_back(std::move(m));
  }
  for (int i = 0; i < n; ++i) {
    int g = shape[d + i];
    Eigen::ArrayXd xi(g);
    for (int k = 0; k < g; ++k) xi[k] = signed_index(k, g) / dom->box_lengths[i];
    lat.axis_dispersion[d + i] = xi.square();
    lat.euclid_freqs.push_back(std::move(xi));
  }

  const std::size_t total = dom->size();
  lat.dispersion.setZero(static_cast<Eigen::Index>(total));
  std::size_t stride = total;
  for (int a = 0; a < n + d; ++a) {
    const int g = shape[a];
    stride /= g;
    const Eigen::ArrayXd& ad = lat.axis_dispersion[a];
    for (std::size_t f = 0; f < total; ++f) lat.dispersion[f] += ad[(f / stride) % g];
  }
  return dom;
}

double nyquist_margin(const Domain& domain, double N) {
  double r = std::numeric_limits<double>::infinity();
  for (int a = 0; a < domain.rank(); ++a) r = std::min(r, domain.max_frequency(a) / (2.0 * N));
  return r;
}

double nyquist_margin(const Domain& domain, const std::vector<double>& bandwidth) {
  double r = std::numeric_limits<double>::infinity();
  for (int a = 0; a < domain.rank(); ++a)
    if (bandwidth[a] > 0) r = std::min(r, domain.max_frequency(a) / (2.0 * bandwidth[a]));
  return r;
}

std::vector<int> auto_grid(int n, int d, const std::vector<double>& box_lengths,
                           const std::vector<double>& torus_weights,
                           const std::vector<double>& euclid_bandwidth,
                           const std::vector<double>& torus_bandwidth, double margin) {
  std::vector<int> g;
  for (int i = 0; i < n; ++i) {
    int s = 4;
    while ((s / 2) / box_lengths[i] < 2.0 * margin * euclid_bandwidth[i]) s *= 2;
    g.push_back(s);
  }
  for (int j = 0; j < d; ++j) {
    int s = 4;
    while (torus_weights[j] * (s / 2) < 2.0 * margin * torus_bandwidth[j]) s *= 2;
    g.push_back(s);
  }
  return g;
}

std::vector<int> unravel(const Domain& domain, std::size_t flat) {
  const auto shape = domain.shape();
  std::vector<int> idx(shape.size());
  for (int a = static_cast<int>(shape.size()) - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % shape[a]);
    flat /= shape[a];
  }
  return idx;
}

std::size_t ravel(const Domain& domain, const std::vector<int>& idx) {
  const auto shape = domain.shape();
  std::size_t f = 0;
  for (std::size_t a = 0; a < shape.size(); ++a) f = f * shape[a] + idx[a];
  return f;
}

}  // namespace semidisp
