#include "semidisp/propagator.hpp"

#include <limits>

#include "semidisp/fft.hpp"

namespace semidisp {

std::vector<Eigen::ArrayXcd> evolution_factors(const Domain& domain, double t) {
  std::vector<Eigen::ArrayXcd> f;
  f.reserve(domain.rank());
  for (const Eigen::ArrayXd& ad : domain.lattice.axis_dispersion) {
    Eigen::ArrayXcd v(ad.size());
    for (Eigen::Index i = 0; i < ad.size(); ++i) v[i] = unit_phase(t * ad[i]);
    f.push_back(std::move(v));
  }
  return f;
}

SpectralField evolve(const SpectralField& spec, double t) {
  SpectralField out{spec.domain, Eigen::ArrayXcd(spec.coeffs.size())};
  if (t == 0.0) {
    out.coeffs = spec.coeffs;
    return out;
  }
  separable_product(out.coeffs.data(), spec.coeffs.data(), spec.domain->shape(),
                    evolution_factors(*spec.domain, t));
  return out;
}

Field evolve(const Field& field, double t) { return from_spectral(evolve(to_spectral(field), t)); }

double wraparound_horizon(const Domain& domain, double N) {
  double T = std::numeric_limits<double>::infinity();
  for (double L : domain.box_lengths) T = std::min(T, L / (8.0 * N));
  return T;
}

Eigen::ArrayXd lp_multiplier(const Domain& domain, double N, LpMode mode) {
  const Eigen::ArrayXd r = domain.lattice.dispersion.sqrt() / N;
  Eigen::ArrayXd m(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    m[i] = lp_profile(r[i]);
    if (mode == LpMode::annulus) m[i] -= lp_profile(2.0 * r[i]);
  }
  return m;
}

SpectralField lp_project(const SpectralField& spec, double N, LpMode mode) {
  return {spec.domain, spec.coeffs * lp_multiplier(*spec.domain, N, mode)};
}

SpectralField x_project(const SpectralField& spec, double M) {
  const Domain& dom = *spec.domain;
  std::vector<Eigen::ArrayXcd> f;
  const auto shape = dom.shape();
  for (int a = 0; a < dom.rank(); ++a) f.emplace_back(Eigen::ArrayXcd::Ones(shape[a]));
  SpectralField out = spec;
  if (dom.n == 0) return out;
  // radial in xi: evaluate per Euclidean block
  std::size_t block = 1;
  for (int i = 0; i < dom.n; ++i) block *= dom.grid_sizes[i];
  Eigen::ArrayXd mult(static_cast<Eigen::Index>(block));
  for (std::size_t e = 0; e < block; ++e) {
    std::size_t rem = e;
    double r2 = 0.0;
    for (int i = dom.n - 1; i >= 0; --i) {
      const int g = dom.grid_sizes[i];
      const double xi = dom.lattice.euclid_freqs[i][static_cast<Eigen::Index>(rem % g)];
      rem /= g;
      r2 += xi * xi;
    }
    mult[static_cast<Eigen::Index>(e)] = lp_profile(std::sqrt(r2) / M);
  }
  const std::size_t rows = dom.size() / block;
  for (std::size_t r = 0; r < rows; ++r)
    out.coeffs.segment(static_cast<Eigen::Index>(r * block), static_cast<Eigen::Index>(block)) *= mult;
  return out;
}

std::vector<Cap> cap_cover(const Domain& domain, double N) {
  std::vector<Cap> caps;
  const int n = domain.n;
  const int d = domain.d;
  // torus modes with beta-weighted norm <= N
  std::vector<int> mlim(d);
  for (int j = 0; j < d; ++j) mlim[j] = static_cast<int>(std::floor(N / domain.torus_weights[j]));
  const int K = static_cast<int>(std::floor(N + 0.5));
  std::vector<int> m(d);
  for (int j = 0; j < d; ++j) m[j] = -mlim[j];
  while (true) {
    double m2 = 0.0;
    for (int j = 0; j < d; ++j) m2 += std::pow(domain.torus_weights[j] * m[j], 2);
    if (m2 <= N * N) {
      const double rad = std::sqrt(N * N - m2);
      std::vector<int> k(n, -K);
      while (true) {
        // distance from the origin to the cube [k - 1/2, k + 1/2)
        double dist2 = 0.0;
        for (int i = 0; i < n; ++i) {
          const double gap = std::max(0.0, std::abs(k[i]) - 0.5);
          dist2 += gap * gap;
        }
        if (dist2 <= rad * rad) caps.push_back({m, k});
        int i = n - 1;
        for (; i >= 0; --i) {
          if (++k[i] <= K) break;
          k[i] = -K;
        }
        if (i < 0) break;
      }
    }
    int j = d - 1;
    for (; j >= 0; --j) {
      if (++m[j] <= mlim[j]) break;
      m[j] = -mlim[j];
    }
    if (j < 0) break;
  }
  return caps;
}

SpectralField cap_project(const SpectralField& spec, const Cap& cap) {
  const Domain& dom = *spec.domain;
  const auto shape = dom.shape();
  SpectralField out = zero_spectrum(spec.domain);
  std::vector<int> idx(dom.rank(), 0);
  for (int j = 0; j < dom.d; ++j) {
    const int g = shape[j];
    if (std::abs(cap.m[j]) > g / 2 || cap.m[j] == g / 2) return out;
    idx[j] = fft_position(cap.m[j], g);
  }
  std::size_t block = 1;
  for (int i = 0; i < dom.n; ++i) block *= dom.grid_sizes[i];
  const std::size_t base = ravel(dom, idx);
  for (std::size_t e = 0; e < block; ++e) {
    std::size_t rem = e;
    bool inside = true;
    for (int i = dom.n - 1; i >= 0; --i) {
      const int g = dom.grid_sizes[i];
      const double xi = dom.lattice.euclid_freqs[i][static_cast<Eigen::Index>(rem % g)];
      rem /= g;
      inside = inside && cap_cube(xi) == cap.k[i];
    }
    if (inside) out.coeffs[static_cast<Eigen::Index>(base + e)] = spec.coeffs[static_cast<Eigen::Index>(base + e)];
  }
  return out;
}

}  // namespace semidisp
