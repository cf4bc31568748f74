#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "semidisp/fit.hpp"
#include "semidisp/norms.hpp"
#include "semidisp/propagator.hpp"
#include "semidisp/spectral.hpp"

namespace semidisp {

enum class Family { focusing, random, single_mode };
Family parse_family(const std::string& name);
std::string family_name(Family f);

struct DomainParams {
  int n = 1;
  int d = 1;
  std::vector<double> box_lengths{128.0};
  std::vector<double> torus_weights{1.0};
  std::vector<int> grid_sizes;  // empty: smallest grid meeting the margin at each scan point
  double margin = 1.0;
};

struct SamplingParams {
  int samples = 0;  // per window; 0 resolves from the data's dispersion spread
  int floor = 32;
  bool richardson = false;  // re-evaluate with doubled samples
  double richardson_tol = 1e-3;
};

struct ScanConfig {
  DomainParams domain;
  Family family = Family::focusing;
  double p = 6;
  double q = 0;  // 0 selects q(p)
  std::vector<double> values;  // N, lambda or M list
  double N = 32;               // fixed cutoff for the mixed-derivative scan
  std::uint64_t seed = 0;
  double tolerance = 0.15;
  WindowKind windows = WindowKind::overlapping;
  SamplingParams sampling;
  double tail_tol = 1e-6;
  int gamma_limit = 4096;  // only binding without Euclidean directions
};

struct ScanPoint {
  double value = 0;
  double ratio = 0;
  int gamma_max = 0;
  std::size_t windows = 0;
  double horizon = 0;
  bool horizon_clipped = false;  // horizon below one time unit
  bool tail_flag = false;
  int samples = 0;
  std::vector<int> grid;
  double richardson_delta = std::numeric_limits<double>::quiet_NaN();
  bool sampling_ok = true;
};

struct ScanResult {
  std::string experiment;
  std::vector<ScanPoint> points;
  FitResult fit;
  bool has_verdict = true;
  bool pass = false;
  std::vector<std::pair<std::string, double>> diagnostics;
};

// domain for one scan point given the Euclidean and torus bandwidths it must carry
DomainPtr scan_domain(const DomainParams& params, double euclid_bw, double torus_bw);

// ||S(t)u0||_{l^q L^p} / ||u0|| with the window count chosen by the tail rule and
// capped by the wrap-around horizon of the data's Euclidean bandwidth.
ScanPoint measure_point(const SpectralField& u0, double p, double q, const ScanConfig& cfg);

ScanResult strichartz_scan(const ScanConfig& cfg);
ScanResult sharpness_scan(const ScanConfig& cfg);
ScanResult decoupling_ratio_scan(const ScanConfig& cfg);
ScanResult mixed_derivative_scan(const ScanConfig& cfg);

// ||S(t)g||_{L^p(I)} for I = [-1, 1]
double decoupling_lhs(const SpectralField& g, double p, int floor);
// (sum over caps of ||S(t)g_cap w_I||_p^2)^{1/2} with w_I = exp(-dist(t, I)^2).
// Each cap is evolved on a small demodulated grid.
double decoupling_rhs(const SpectralField& g, double N, double p);
// same sum evaluated on the full grid; reference for tests
double decoupling_rhs_direct(const SpectralField& g, double N, double p);

// ball data times psi(|xi|/M), normalized by the unprojected L^2 norm; needs only
// Euclidean frequencies below 2M on the grid
SpectralField projected_focusing(DomainPtr domain, double N, double M);
// lattice points with |xi|^2 + sum beta^2 m^2 <= N^2 on the infinite lattice of the box
long ball_count(int n, int d, const std::vector<double>& box_lengths, const std::vector<double>& torus_weights,
                double N);

}  // namespace semidisp
