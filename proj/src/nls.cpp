#include "semidisp/nls.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semidisp/fft.hpp"
#include "semidisp/propagator.hpp"

namespace semidisp {

NlsBlowup::NlsBlowup(double t, double amplitude)
    : std::runtime_error("solution blew up at t = " + std::to_string(t) + " (max |u| = " + std::to_string(amplitude) + ")"),
      t_(t) {}

namespace {

std::vector<double> schedule(const NlsConfig& cfg) {
  std::vector<double> cps = cfg.checkpoints.empty() ? std::vector<double>{cfg.T} : cfg.checkpoints;
  std::sort(cps.begin(), cps.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  return cps;
}

long step_index(double t, double dt) { return std::lround(std::abs(t) / dt); }

std::vector<Eigen::ArrayXcd> dealias_factors(const Domain& dom) {
  std::vector<Eigen::ArrayXcd> f;
  for (int g : dom.shape()) {
    Eigen::ArrayXcd v(g);
    for (int i = 0; i < g; ++i) v[i] = 3 * std::abs(signed_index(i, g)) <= g ? 1.0 : 0.0;
    f.push_back(std::move(v));
  }
  return f;
}

std::vector<double> storage_bandwidth(const SpectralField& s) {
  const Domain& dom = *s.domain;
  std::vector<double> bw;
  const double tb = torus_bandwidth(s), eb = euclid_bandwidth(s);
  for (int j = 0; j < dom.d; ++j) bw.push_back(tb);
  for (int i = 0; i < dom.n; ++i) bw.push_back(eb);
  return bw;
}

void nonlinear_phase(Eigen::Ref<Eigen::ArrayXcd> u, const NlsConfig& cfg, double dt, double t) {
  const double half = (cfg.sigma - 1) / 2.0;
  double peak = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double a2 = std::norm(u[i]);
    peak = std::max(peak, a2);
    const double phase = -cfg.sign * std::pow(a2, half) * dt;
    u[i] *= std::polar(1.0, phase);
  }
  const double amp = std::sqrt(peak);
  if (!std::isfinite(amp) || amp > 1e6) throw NlsBlowup(t, amp);
}

// F(u) = |u|^{sigma-1} u in place
void apply_F(Eigen::Ref<Eigen::ArrayXcd> u, int sigma) {
  const double half = (sigma - 1) / 2.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] *= std::pow(std::norm(u[i]), half);
}

}  // namespace

void validate_nls(const NlsConfig& cfg, const SpectralField& u0) {
  const Domain& dom = *u0.domain;
  if (cfg.sigma == 5) {
    if (dom.n != 1 || dom.d != 1) throw ValidationError("sigma", "quintic runs need (n, d) = (1, 1)");
  } else if (cfg.sigma == 3) {
    if (dom.n != 2 || dom.d != 1) throw ValidationError("sigma", "cubic runs need (n, d) = (2, 1)");
  } else {
    throw ValidationError("sigma", "must be 3 or 5");
  }
  if (cfg.sign != 1 && cfg.sign != -1) throw ValidationError("sign", "must be +1 or -1");
  if (!(cfg.dt > 0) || cfg.dt > 0.1) throw ValidationError("dt", "must lie in (0, 0.1]");
  if (!std::isfinite(cfg.T) || cfg.T == 0) throw ValidationError("T", "must be finite and nonzero");
  for (double c : cfg.checkpoints) {
    if (c == 0 || (c > 0) != (cfg.T > 0) || std::abs(c) > std::abs(cfg.T) + 1e-12)
      throw ValidationError("checkpoints", "must lie between 0 and T");
    if (std::abs(std::abs(c) / cfg.dt - std::round(std::abs(c) / cfg.dt)) > 1e-9)
      throw ValidationError("checkpoints", "must be multiples of dt");
  }
  if (std::abs(std::abs(cfg.T) / cfg.dt - std::round(std::abs(cfg.T) / cfg.dt)) > 1e-9)
    throw ValidationError("T", "must be a multiple of dt");
  if (nyquist_margin(dom, storage_bandwidth(u0)) < 2.0)
    throw ValidationError("grid_sizes", "nyquist margin below 2 for the data's bandwidth");
  if (dom.n > 0) {
    const double eb = euclid_bandwidth(u0);
    if (eb > 0 && std::abs(cfg.T) > wraparound_horizon(dom, eb))
      throw ValidationError("T", "beyond the wrap-around horizon for the data's bandwidth");
  }
}

Trajectory split_step_evolve(const Field& u0, const NlsConfig& cfg) {
  SpectralField c = to_spectral(u0);
  validate_nls(cfg, c);
  const Domain& dom = *u0.domain;
  const auto shape = dom.shape();
  const double dt = cfg.T > 0 ? cfg.dt : -cfg.dt;
  const auto half = evolution_factors(dom, dt / 2);
  const auto mask = dealias_factors(dom);
  const auto cps = schedule(cfg);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.fields.push_back(u0);
  const long total = step_index(cfg.T, cfg.dt);
  std::size_t next = 0;
  Eigen::ArrayXcd tmp(c.coeffs.size());
  for (long k = 1; k <= total; ++k) {
    separable_product(tmp.data(), c.coeffs.data(), shape, half);
    c.coeffs = tmp;
    if (cfg.nonlinear) {
      Field u = from_spectral(c);
      nonlinear_phase(u.values, cfg, dt, k * dt);
      c = to_spectral(u);
      if (cfg.dealias) {
        separable_product(tmp.data(), c.coeffs.data(), shape, mask);
        c.coeffs = tmp;
      }
    }
    separable_product(tmp.data(), c.coeffs.data(), shape, half);
    c.coeffs = tmp;
    while (next < cps.size() && step_index(cps[next], cfg.dt) == k) {
      traj.times.push_back(cps[next]);
      traj.fields.push_back(from_spectral(c));
      ++next;
    }
  }
  return traj;
}

PicardResult picard_iterate(const Field& u0, const NlsConfig& cfg, int iterations) {
  if (iterations < 1) throw ValidationError("iterations", "must be at least 1");
  const SpectralField c0 = to_spectral(u0);
  validate_nls(cfg, c0);
  if (hs_norm(c0, 0.5) > cfg.eta) throw ValidationError("eta", "initial data above the small-data threshold");
  const Domain& dom = *u0.domain;
  const auto shape = dom.shape();
  const double dt = cfg.T > 0 ? cfg.dt : -cfg.dt;
  const long K = step_index(cfg.T, cfg.dt);
  const auto mask = dealias_factors(dom);

  std::vector<Eigen::ArrayXcd> V(K + 1, c0.coeffs);
  PicardResult res;
  Eigen::ArrayXcd tmp(c0.coeffs.size());
  const Eigen::ArrayXd w = (1.0 + dom.lattice.dispersion).sqrt();
  for (int it = 0; it < iterations; ++it) {
    std::vector<Eigen::ArrayXcd> next(K + 1);
    next[0] = c0.coeffs;
    Eigen::ArrayXcd acc = Eigen::ArrayXcd::Zero(c0.coeffs.size());
    for (long j = 0; j < K; ++j) {
      const double s = (j + 0.5) * dt;
      SpectralField mid{u0.domain, 0.5 * (V[j] + V[j + 1])};
      Field u = from_spectral(evolve(mid, s));
      if (cfg.nonlinear) apply_F(u.values, cfg.sigma);
      else u.values.setZero();
      SpectralField g = to_spectral(u);
      if (cfg.dealias) {
        separable_product(tmp.data(), g.coeffs.data(), shape, mask);
        g.coeffs = tmp;
      }
      acc += evolve(g, -s).coeffs;
      next[j + 1] = c0.coeffs - std::complex<double>(0.0, cfg.sign * dt) * acc;
    }
    double dist = 0.0;
    for (long k = 0; k <= K; ++k)
      dist = std::max(dist, std::sqrt((w * (next[k] - V[k]).abs2()).sum() * dom.spectral_cell()));
    if (!res.distances.empty()) {
      res.ratios.push_back(res.distances.back() > 0 ? dist / res.distances.back() : 0.0);
      if (dist > res.distances.back()) res.diverged = true;
    }
    res.distances.push_back(dist);
    V = std::move(next);
  }
  res.trajectory.times.push_back(0.0);
  res.trajectory.fields.push_back(u0);
  for (double cp : schedule(cfg)) {
    const long k = step_index(cp, cfg.dt);
    res.trajectory.times.push_back(cp);
    res.trajectory.fields.push_back(from_spectral(evolve(SpectralField{u0.domain, V[k]}, k * dt)));
  }
  return res;
}

ConservedQuantities conserved(const Field& u, const NlsConfig& cfg) {
  const Domain& dom = *u.domain;
  const SpectralField s = to_spectral(u);
  ConservedQuantities q;
  const double cell = dom.cell_volume();
  q.mass = u.values.abs2().sum() * cell;
  q.kinetic = -2.0 * M_PI * (dom.lattice.dispersion * s.coeffs.abs2()).sum() * dom.spectral_cell();
  if (cfg.nonlinear)
    q.potential = cfg.sign * 2.0 / (cfg.sigma + 1) * u.values.abs2().pow((cfg.sigma + 1) / 2.0).sum() * cell;
  q.energy = q.kinetic + q.potential;
  return q;
}

ScatteringProfile scattering_profile(const Trajectory& traj, const NlsConfig& cfg) {
  ScatteringProfile prof;
  if (traj.fields.empty()) throw ValidationError("trajectory", "empty trajectory");
  const SpectralField c0 = to_spectral(traj.fields.front());
  const Domain& dom = *c0.domain;
  if (hs_norm(c0, 0.5) > cfg.eta) throw ValidationError("eta", "initial data above the small-data threshold");
  const double eb = euclid_bandwidth(c0);
  const double horizon = dom.n > 0 && eb > 0 ? wraparound_horizon(dom, eb) : INFINITY;
  std::vector<SpectralField> V;
  std::vector<double> ts;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    if (t == 0.0) continue;
    if (std::abs(t) > horizon) throw ValidationError("checkpoints", "beyond the wrap-around horizon");
    V.push_back(evolve(to_spectral(traj.fields[k]), -t));
    ts.push_back(t);
  }
  for (std::size_t k = 0; k + 1 < V.size(); ++k) {
    prof.times.push_back(ts[k + 1]);
    prof.drifts.push_back(hs_norm(SpectralField{V[k].domain, V[k + 1].coeffs - V[k].coeffs}, 0.5));
  }
  if (!V.empty()) prof.v_plus = V.back();
  return prof;
}

}  // namespace semidisp
