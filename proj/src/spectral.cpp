#include "semidisp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "semidisp/fft.hpp"
#include "semidisp/rng.hpp"

namespace semidisp {

namespace {

std::vector<Eigen::ArrayXcd> transform_factors(const Domain& dom, bool forward) {
  std::vector<Eigen::ArrayXcd> f;
  const auto shape = dom.shape();
  for (int a = 0; a < dom.rank(); ++a) {
    const int g = shape[a];
    Eigen::ArrayXcd v(g);
    if (dom.is_euclid_axis(a)) {
      const double L = dom.box_lengths[a - dom.d];
      const double w = forward ? L / g : 1.0 / L;
      for (int i = 0; i < g; ++i) v[i] = (i % 2 == 0) ? w : -w;
    } else {
      v.setConstant(forward ? 1.0 / g : 1.0);
    }
    f.push_back(std::move(v));
  }
  return f;
}

void check_nyquist(const Domain& dom, double N, const char* key) {
  if (N > 0 && nyquist_margin(dom, N) < 1.0)
    throw ValidationError(key, "nyquist margin below 1 for cutoff " + std::to_string(N));
}

}  // namespace

SpectralField to_spectral(const Field& field) {
  const Domain& dom = *field.domain;
  FftWorkspace& ws = workspace_for(dom.shape());
  ws.array() = field.values;
  ws.forward();
  separable_product(ws.data(), ws.data(), ws.shape(), transform_factors(dom, true));
  return {field.domain, ws.array()};
}

Field from_spectral(const SpectralField& spec) {
  const Domain& dom = *spec.domain;
  FftWorkspace& ws = workspace_for(dom.shape());
  separable_product(ws.data(), spec.coeffs.data(), ws.shape(), transform_factors(dom, false));
  ws.backward();
  return {spec.domain, ws.array()};
}

Field zero_field(DomainPtr domain) {
  const auto n = static_cast<Eigen::Index>(domain->size());
  return {std::move(domain), Eigen::ArrayXcd::Zero(n)};
}

SpectralField zero_spectrum(DomainPtr domain) {
  const auto n = static_cast<Eigen::Index>(domain->size());
  return {std::move(domain), Eigen::ArrayXcd::Zero(n)};
}

double l2_norm(const Field& field) {
  return std::sqrt(field.values.abs2().sum() * field.domain->cell_volume());
}

double l2_norm(const SpectralField& spec) {
  return std::sqrt(spec.coeffs.abs2().sum() * spec.domain->spectral_cell());
}

double hs_norm(const SpectralField& spec, double s) {
  if (s == 0.0) return l2_norm(spec);
  const Eigen::ArrayXd w = (1.0 + spec.domain->lattice.dispersion).pow(s);
  return std::sqrt((w * spec.coeffs.abs2()).sum() * spec.domain->spectral_cell());
}

double hs_norm(const Field& field, double s) { return hs_norm(to_spectral(field), s); }

std::complex<double> inner_product(const SpectralField& a, const SpectralField& b) {
  return (a.coeffs * b.coeffs.conjugate()).sum() * a.domain->spectral_cell();
}

double inner_product_real(const SpectralField& a, const SpectralField& b) {
  return inner_product(a, b).real();
}

SpectralField random_spectrum(DomainPtr domain, double N, std::uint64_t seed) {
  check_nyquist(*domain, N, "N");
  SpectralField s = zero_spectrum(domain);
  SplitMix64 rng(seed);
  const Eigen::ArrayXd& D = domain->lattice.dispersion;
  const double N2 = N * N;
  for (Eigen::Index i = 0; i < D.size(); ++i)
    if (D[i] <= N2) s.coeffs[i] = rng.complex_normal();
  s.coeffs /= l2_norm(s);
  return s;
}

SpectralField focusing_spectrum(DomainPtr domain, double N) {
  check_nyquist(*domain, N, "N");
  SpectralField s = zero_spectrum(domain);
  const double N2 = N * N;
  s.coeffs = (domain->lattice.dispersion <= N2).cast<std::complex<double>>();
  s.coeffs /= l2_norm(s);
  return s;
}

SpectralField gaussian_x_spectrum(DomainPtr domain, double lambda) {
  if (!(lambda >= 1.0)) throw ValidationError("lambda", "must be at least 1");
  const Domain& dom = *domain;
  const double band = 1.0 / lambda;
  for (int i = 0; i < dom.n; ++i) {
    if (dom.box_lengths[i] * band < 8.0)
      throw ValidationError("lambda", "profile not resolved on the frequency grid");
    if (dom.max_frequency(dom.euclid_axis(i)) < 2.0 * band)
      throw ValidationError("lambda", "nyquist margin below 1");
  }
  SpectralField s = zero_spectrum(domain);
  // torus mode 0 is the leading Euclidean block
  std::size_t block = 1;
  for (int i = 0; i < dom.n; ++i) block *= dom.grid_sizes[i];
  for (std::size_t f = 0; f < block; ++f) {
    std::size_t rem = f;
    double r2 = 0.0;
    for (int i = dom.n - 1; i >= 0; --i) {
      const int g = dom.grid_sizes[i];
      const double xi = dom.lattice.euclid_freqs[i][static_cast<Eigen::Index>(rem % g)] * lambda;
      rem /= g;
      r2 += xi * xi;
    }
    if (r2 <= 1.0) s.coeffs[static_cast<Eigen::Index>(f)] = std::exp(-std::numbers::pi * r2);
  }
  return s;
}

Field random_field(DomainPtr domain, double N, std::uint64_t seed) {
  return from_spectral(random_spectrum(std::move(domain), N, seed));
}

Field focusing_field(DomainPtr domain, double N) {
  return from_spectral(focusing_spectrum(std::move(domain), N));
}

Field gaussian_x_field(DomainPtr domain, double lambda) {
  return from_spectral(gaussian_x_spectrum(std::move(domain), lambda));
}

SpectralField plane_wave_spectrum(DomainPtr domain, const std::vector<int>& k,
                                  const std::vector<int>& m, std::complex<double> amplitude) {
  const Domain& dom = *domain;
  const auto shape = dom.shape();
  std::vector<int> idx(dom.rank());
  for (int j = 0; j < dom.d; ++j) idx[j] = fft_position(m.at(j), shape[j]);
  for (int i = 0; i < dom.n; ++i) idx[dom.d + i] = fft_position(k.at(i), shape[dom.d + i]);
  SpectralField s = zero_spectrum(domain);
  s.coeffs[static_cast<Eigen::Index>(ravel(dom, idx))] = amplitude / dom.spectral_cell();
  return s;
}

SpectralField packet_spectrum(DomainPtr domain, double width, double band,
                              const std::vector<TorusMode>& modes) {
  const Domain& dom = *domain;
  const auto shape = dom.shape();
  SpectralField s = zero_spectrum(domain);
  const double amp = std::pow(width, dom.n);
  for (const auto& [m, c] : modes) {
    std::vector<int> idx(dom.rank(), 0);
    for (int j = 0; j < dom.d; ++j) idx[j] = fft_position(m.at(j), shape[j]);
    // iterate the Euclidean block of this torus mode
    std::size_t block = 1;
    for (int i = 0; i < dom.n; ++i) block *= shape[dom.d + i];
    const std::size_t base = ravel(dom, idx);
    for (std::size_t e = 0; e < block; ++e) {
      std::size_t rem = e;
      double r2 = 0.0;
      for (int i = dom.n - 1; i >= 0; --i) {
        const int g = shape[dom.d + i];
        const double xi = dom.lattice.euclid_freqs[i][static_cast<Eigen::Index>(rem % g)];
        rem /= g;
        r2 += xi * xi;
      }
      if (r2 <= band * band)
        s.coeffs[static_cast<Eigen::Index>(base + e)] += c * amp * std::exp(-std::numbers::pi * width * width * r2);
    }
  }
  return s;
}

namespace {
// coefficients at or below this are rounding residue, not support
double support_floor(const SpectralField& spec) {
  return spec.coeffs.size() ? 1e-13 * spec.coeffs.abs().maxCoeff() : 0.0;
}
}  // namespace

double euclid_bandwidth(const SpectralField& spec) {
  const Domain& dom = *spec.domain;
  if (dom.n == 0) return 0.0;
  const double D_euclid_max = [&] {
    double b = 0.0;
    const std::size_t total = dom.size();
    std::size_t block = 1;
    for (int i = 0; i < dom.n; ++i) block *= dom.grid_sizes[i];
    const double floor = support_floor(spec);
    for (std::size_t f = 0; f < total; ++f) {
      if (std::abs(spec.coeffs[static_cast<Eigen::Index>(f)]) <= floor) continue;
      std::size_t rem = f % block;
      double r2 = 0.0;
      for (int i = dom.n - 1; i >= 0; --i) {
        const int g = dom.grid_sizes[i];
        const double xi = dom.lattice.euclid_freqs[i][static_cast<Eigen::Index>(rem % g)];
        rem /= g;
        r2 += xi * xi;
      }
      b = std::max(b, r2);
    }
    return b;
  }();
  return std::sqrt(D_euclid_max);
}

double torus_bandwidth(const SpectralField& spec) {
  const Domain& dom = *spec.domain;
  if (dom.d == 0) return 0.0;
  std::size_t block = 1;
  for (int i = 0; i < dom.n; ++i) block *= dom.grid_sizes[i];
  const auto shape = dom.shape();
  double b = 0.0;
  const std::size_t rows = dom.size() / block;
  const double floor = support_floor(spec);
  for (std::size_t r = 0; r < rows; ++r) {
    if ((spec.coeffs.segment(static_cast<Eigen::Index>(r * block), static_cast<Eigen::Index>(block)).abs() <= floor).all())
      continue;
    std::size_t rem = r;
    double m2 = 0.0;
    for (int j = dom.d - 1; j >= 0; --j) {
      const int g = shape[j];
      const double bm = dom.torus_weights[j] * dom.lattice.torus_freqs[j][static_cast<Eigen::Index>(rem % g)];
      rem /= g;
      m2 += bm * bm;
    }
    b = std::max(b, m2);
  }
  return std::sqrt(b);
}

double dispersion_spread(const SpectralField& spec) {
  const Eigen::ArrayXd& D = spec.domain->lattice.dispersion;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const double floor = support_floor(spec);
  for (Eigen::Index i = 0; i < D.size(); ++i) {
    if (std::abs(spec.coeffs[i]) <= floor) continue;
    lo = std::min(lo, D[i]);
    hi = std::max(hi, D[i]);
  }
  return hi >= lo ? hi - lo : 0.0;
}

bool is_real_spectrum(const SpectralField& spec) { return (spec.coeffs.imag() == 0.0).all(); }

void write_csv(const Field& field, std::ostream& os) {
  os << "index,re,im\n";
  char buf[96];
  for (Eigen::Index i = 0; i < field.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(i),
                  field.values[i].real(), field.values[i].imag());
    os << buf;
  }
}

}  // namespace semidisp
