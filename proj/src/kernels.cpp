#include "semidisp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "semidisp/flow.hpp"
#include "semidisp/norms.hpp"
#include "semidisp/propagator.hpp"
#include "semidisp/rng.hpp"

namespace semidisp {

std::complex<double> gauss_sum_exact(long a, long q) {
  if (q < 1) throw std::invalid_argument("gauss sum requires q >= 1");
  if (std::gcd(a, q) != 1) throw std::invalid_argument("gauss sum requires gcd(a, q) = 1");
  const unsigned long long uq = static_cast<unsigned long long>(q);
  const unsigned long long ua = static_cast<unsigned long long>(((a % q) + q) % q);
  std::complex<double> s = 0.0;
  for (unsigned long long k = 0; k < uq; ++k) {
    const unsigned long long r = (ua * ((k * k) % uq)) % uq;
    s += unit_phase(static_cast<double>(r) / static_cast<double>(q));
  }
  return s;
}

double gauss_sum_magnitude(long q) {
  if (q % 2 == 1) return std::sqrt(static_cast<double>(q));
  if (q % 4 == 2) return 0.0;
  return std::sqrt(2.0 * q);
}

std::complex<double> torus_weyl_sum(double t, const std::vector<double>& y, double N,
                                    const std::vector<double>& beta, Cutoff cutoff) {
  const int d = static_cast<int>(beta.size());
  if (d == 0) return 1.0;
  const int reach = cutoff == Cutoff::smooth ? static_cast<int>(std::ceil(2.0 * N)) : static_cast<int>(std::floor(N));
  std::vector<int> l(d, -reach);
  std::complex<double> s = 0.0;
  while (true) {
    double r2 = 0.0, disp = 0.0, lin = 0.0;
    for (int j = 0; j < d; ++j) {
      r2 += double(l[j]) * l[j];
      disp += beta[j] * beta[j] * double(l[j]) * l[j];
      lin += y[j] * l[j];
    }
    const double r = std::sqrt(r2);
    const double w = cutoff == Cutoff::smooth ? lp_profile(r / N) : (r <= N ? 1.0 : 0.0);
    if (w != 0.0) s += w * unit_phase(lin + t * disp);
    int j = d - 1;
    while (j >= 0 && l[j] == reach) l[j--] = -reach;
    if (j < 0) break;
    ++l[j];
  }
  return s;
}

std::complex<double> euclid_kernel_factor(const Domain& domain, const std::vector<double>& x, double t,
                                          double N) {
  const int n = domain.n;
  if (n == 0) return 1.0;
  // lattice indices with |xi_i| < 2N per axis
  std::vector<std::vector<double>> axes(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::ArrayXd& xi = domain.lattice.euclid_freqs[i];
    for (Eigen::Index k = 0; k < xi.size(); ++k)
      if (std::abs(xi[k]) < 2.0 * N) axes[i].push_back(xi[k]);
  }
  std::complex<double> s = 0.0;
  if (n == 1) {
    for (double xi : axes[0]) {
      const double w = lp_profile(std::abs(xi) / N);
      if (w != 0.0) s += w * unit_phase(x[0] * xi + t * xi * xi);
    }
    return s * domain.spectral_cell();
  }
  std::vector<std::size_t> pos(n, 0);
  while (true) {
    double r2 = 0.0, lin = 0.0;
    for (int i = 0; i < n; ++i) {
      const double xi = axes[i][pos[i]];
      r2 += xi * xi;
      lin += x[i] * xi;
    }
    const double w = lp_profile(std::sqrt(r2) / N);
    if (w != 0.0) s += w * unit_phase(lin + t * r2);
    int i = n - 1;
    while (i >= 0 && pos[i] + 1 == axes[i].size()) pos[i--] = 0;
    if (i < 0) break;
    ++pos[i];
  }
  return s * domain.spectral_cell();
}

std::complex<double> kernel_K(const Domain& domain, const std::vector<double>& x,
                              const std::vector<double>& y, double t, double N) {
  return torus_weyl_sum(t, y, N, domain.torus_weights) * euclid_kernel_factor(domain, x, t, N);
}

namespace {

// psi(|xi|/N) psi(|m|/N) per lattice point, storage order
Eigen::ArrayXd kernel_cutoff(const Domain& dom, double N) {
  const auto shape = dom.shape();
  const std::size_t total = dom.size();
  Eigen::ArrayXd e2 = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(total));
  Eigen::ArrayXd m2 = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(total));
  std::size_t stride = total;
  for (int a = 0; a < dom.rank(); ++a) {
    const int g = shape[a];
    stride /= g;
    for (std::size_t f = 0; f < total; ++f) {
      const int i = static_cast<int>((f / stride) % g);
      if (dom.is_euclid_axis(a)) {
        const double xi = dom.lattice.euclid_freqs[a - dom.d][i];
        e2[static_cast<Eigen::Index>(f)] += xi * xi;
      } else {
        const double m = dom.lattice.torus_freqs[a][i];
        m2[static_cast<Eigen::Index>(f)] += m * m;
      }
    }
  }
  Eigen::ArrayXd out(static_cast<Eigen::Index>(total));
  for (Eigen::Index f = 0; f < out.size(); ++f)
    out[f] = lp_profile(std::sqrt(e2[f]) / N) * lp_profile(std::sqrt(m2[f]) / N);
  return out;
}

std::vector<double> coordinate(const Domain& dom, const std::vector<int>& idx, bool euclid) {
  const auto shape = dom.shape();
  std::vector<double> c;
  if (euclid) {
    for (int i = 0; i < dom.n; ++i) {
      const int a = dom.euclid_axis(i);
      c.push_back(idx[a] * dom.box_lengths[i] / shape[a]);
    }
  } else {
    for (int j = 0; j < dom.d; ++j) c.push_back(double(idx[j]) / shape[j]);
  }
  return c;
}

}  // namespace

Field kernel_convolve(const Field& h, double t, double N) {
  SpectralField s = to_spectral(h);
  s.coeffs *= kernel_cutoff(*h.domain, N);
  return from_spectral(evolve(s, t));
}

Field kernel_convolve_direct(const Field& h, double t, double N) {
  const Domain& dom = *h.domain;
  const auto shape = dom.shape();
  const std::size_t total = dom.size();
  // K is periodic on the box, so it is tabulated on grid offsets
  Eigen::ArrayXcd table(static_cast<Eigen::Index>(total));
  for (std::size_t f = 0; f < total; ++f) {
    const auto idx = unravel(dom, f);
    table[static_cast<Eigen::Index>(f)] = kernel_K(dom, coordinate(dom, idx, true), coordinate(dom, idx, false), t, N);
  }
  Field out = zero_field(h.domain);
  const double cell = dom.cell_volume();
  for (std::size_t f = 0; f < total; ++f) {
    const auto i = unravel(dom, f);
    std::complex<double> acc = 0.0;
    for (std::size_t g = 0; g < total; ++g) {
      const auto j = unravel(dom, g);
      std::vector<int> diff(i.size());
      for (std::size_t a = 0; a < i.size(); ++a) diff[a] = ((i[a] - j[a]) % shape[a] + shape[a]) % shape[a];
      acc += table[static_cast<Eigen::Index>(ravel(dom, diff))] * h.values[static_cast<Eigen::Index>(g)];
    }
    out.values[static_cast<Eigen::Index>(f)] = acc * cell;
  }
  return out;
}

double MajorArc::lo(double N) const { return std::max(0.0, double(a) / q - 1.0 / (q * N)); }
double MajorArc::hi(double N) const { return std::min(1.0, double(a) / q + 1.0 / (q * N)); }

void MajorArc::validate() const {
  if (q < 1) throw ValidationError("arcs", "q must be at least 1");
  if (q == 1 && a == 0) return;
  if (a < 1 || a >= q) throw ValidationError("arcs", "a must satisfy 1 <= a < q");
  if (std::gcd(a, q) != 1) throw ValidationError("arcs", "gcd(a, q) must be 1");
}

std::vector<MajorArc> major_arcs(long Q) {
  std::vector<MajorArc> arcs{{1, 0}};
  for (long q = 2; q <= Q; ++q)
    for (long a = 1; a < q; ++a)
      if (std::gcd(a, q) == 1) arcs.push_back({q, a});
  return arcs;
}

double major_arc_bound(int dim, double N, const MajorArc& arc, double t) {
  const double h = dim / 2.0;
  const double Nd = std::pow(N, dim);
  return Nd / (std::pow(double(arc.q), h) * (1.0 + Nd * std::pow(std::abs(t - double(arc.a) / arc.q), h)));
}

namespace {

// max over a shift grid of the discretized Euclidean majorant
double discrete_majorant(double x, double t, double N) {
  const int reach = static_cast<int>(std::ceil(2.0 * N)) + 1;
  double best = 0.0;
  for (int s = 0; s < 32; ++s) {
    const double al = s / 32.0;
    std::complex<double> acc = 0.0;
    for (int k = -reach; k <= reach; ++k) {
      const double w = lp_profile(std::abs(al + k) / N);
      if (w != 0.0) acc += w * unit_phase((x + 2.0 * t * al) * k + t * double(k) * k);
    }
    best = std::max(best, std::abs(acc));
  }
  return best;
}

}  // namespace

MajorArcReport major_arc_check(int d, double N, const std::vector<MajorArc>& arcs, int sample_count,
                               std::uint64_t seed) {
  if (!(N >= 8)) throw ValidationError("N", "major-arc check requires N >= 8");
  if (sample_count < 1) throw ValidationError("samples", "at least one sample per arc");
  for (const auto& arc : arcs) arc.validate();
  // box of 16N with the xi lattice reaching 2N
  const double L = 16.0 * N;
  int g = 4;
  while (g / 2 < 2.0 * N * L) g *= 2;
  std::vector<int> grid{g};
  for (int j = 0; j < d; ++j) grid.push_back(4);
  const DomainPtr dom = build_domain(1, d, {L}, std::vector<double>(d, 1.0), grid);

  MajorArcReport rep;
  rep.N = N;
  SplitMix64 rng(seed);
  for (const auto& arc : arcs) {
    ArcRatio r{arc, 0.0, 0.0};
    const double centre = double(arc.a) / arc.q;
    for (int s = 0; s < sample_count; ++s) {
      std::vector<double> x{0.0}, y(d, 0.0);
      double t = centre;
      if (s > 0) {
        x[0] = rng.uniform() - 0.5;
        for (double& v : y) v = rng.uniform();
        const double u = rng.uniform();
        t = arc.lo(N) + u * (arc.hi(N) - arc.lo(N));
      }
      const double bound = major_arc_bound(1 + d, N, arc, t);
      const double W = std::abs(torus_weyl_sum(t, y, N, dom->torus_weights));
      const double E = std::abs(euclid_kernel_factor(*dom, x, t, N));
      r.kernel = std::max(r.kernel, W * E / bound);
      r.majorant = std::max(r.majorant, W * discrete_majorant(x[0], t, N) / bound);
    }
    rep.max_ratio = std::max(rep.max_ratio, r.kernel);
    if (arc.q >= 2) rep.max_ratio_rational = std::max(rep.max_ratio_rational, r.kernel);
    rep.majorant_ratio = std::max(rep.majorant_ratio, r.majorant);
    rep.arcs.push_back(r);
  }
  return rep;
}

KernelDecay kernel_decay_fit(const KernelDecayConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("n", "kernel decay needs a Euclidean direction");
  if (cfg.torus_modes < 1) throw ValidationError("torus_modes", "at least one torus mode");
  if (!(cfg.p >= 2.0)) throw ValidationError("p", "must be at least 2");
  if (cfg.gamma_min < 2) throw ValidationError("gamma_range", "gamma must start at 2 or later");
  const double band = 1.0;
  const double width = 3.0;
  std::vector<double> Ls(cfg.n, cfg.box_length), betas(cfg.d, cfg.beta);
  const double tb = std::max(1.0, double(cfg.torus_modes));
  const auto grid = auto_grid(cfg.n, cfg.d, Ls, betas, std::vector<double>(cfg.n, band),
                              std::vector<double>(cfg.d, tb), 1.0);
  const DomainPtr dom = build_domain(cfg.n, cfg.d, Ls, betas, grid);

  std::vector<TorusMode> modes;
  for (int r = 0; r < cfg.torus_modes; ++r) {
    std::vector<int> m(cfg.d, 0);
    if (cfg.d > 0) m[0] = r;
    modes.emplace_back(m, 1.0);
  }
  const SpectralField h0 = packet_spectrum(dom, width, band, modes);

  // time bump b(s) on (-1, 1); its transform in s at each dispersion value
  const int ns = 512;
  auto bump = [](double s) { return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0; };
  const double p = cfg.p;
  const double pd = std::isinf(p) ? 1.0 : p / (p - 1.0);
  double bnorm = 0.0;
  for (int j = 0; j < ns; ++j) bnorm += std::pow(bump(-1.0 + 2.0 * (j + 0.5) / ns), pd) * 2.0 / ns;
  bnorm = std::pow(bnorm, 1.0 / pd);
  const double hnorm = bnorm * lp_space_norm(from_spectral(h0), pd);

  SpectralField w0 = h0;
  const Eigen::ArrayXd cut = kernel_cutoff(*dom, cfg.N);
  for (Eigen::Index f = 0; f < w0.coeffs.size(); ++f) {
    if (w0.coeffs[f] == 0.0) continue;
    const double D = dom->lattice.dispersion[f];
    std::complex<double> acc = 0.0;
    for (int j = 0; j < ns; ++j) {
      const double s = -1.0 + 2.0 * (j + 0.5) / ns;
      acc += bump(s) * unit_phase(-s * D);
    }
    w0.coeffs[f] *= cut[f] * acc * (2.0 / ns);
  }

  KernelDecay out;
  out.horizon = wraparound_horizon(*dom, euclid_bandwidth(w0));
  const int last = std::min(cfg.gamma_max, static_cast<int>(std::floor(out.horizon)) - 1);
  out.clipped = last < cfg.gamma_max;
  if (last < cfg.gamma_min || double(last) / cfg.gamma_min < 8.0)
    throw ValidationError("gamma_range", "fewer than 4 dyadic points inside the wrap-around horizon");

  FreeFlow flow(w0);
  WindowGrid wg;
  wg.kind = WindowKind::overlapping;
  wg.samples_per_window = resolved_samples(w0, 2.0, 32);
  std::vector<double> xs;
  for (int g = cfg.gamma_min; g <= last; ++g) {
    out.gammas.push_back(g);
    xs.push_back(g);
    out.ratios.push_back(window_lp_norm(flow, p, wg, g) / hnorm);
  }
  out.fit = loglog_fit(xs, out.ratios);
  out.fit.reference = std::isinf(p) ? -cfg.n / 2.0 : cfg.n * (2.0 - p) / (2.0 * p);
  out.fit.tolerance = p == 2.0 ? 0.05 : 0.1;
  out.fit.pass = !out.fit.poor_fit && std::abs(out.fit.slope - out.fit.reference) <= out.fit.tolerance;
  return out;
}

}  // namespace semidisp
