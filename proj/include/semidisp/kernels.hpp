#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "semidisp/fit.hpp"
#include "semidisp/spectral.hpp"

namespace semidisp {

enum class Cutoff { smooth, sharp };

// S(a, q) = sum_{k<q} e^{2 pi i a k^2 / q}; requires gcd(a, q) = 1
std::complex<double> gauss_sum_exact(long a, long q);
// |S(a,q)| by the classical law
double gauss_sum_magnitude(long q);

// sum over l in Z^d of psi(|l|/N) e^{2 pi i (y.l + t sum beta^2 l^2)};
// the sharp cutoff is the indicator of |l| <= N
std::complex<double> torus_weyl_sum(double t, const std::vector<double>& y, double N,
                                    const std::vector<double>& beta, Cutoff cutoff = Cutoff::smooth);

// Riemann sum over the domain's xi lattice of psi(|xi|/N) e^{2 pi i (x.xi + t|xi|^2)} / prod L
std::complex<double> euclid_kernel_factor(const Domain& domain, const std::vector<double>& x, double t,
                                          double N);

std::complex<double> kernel_K(const Domain& domain, const std::vector<double>& x,
                              const std::vector<double>& y, double t, double N);

// K(., ., t) * h over the box, applied as a frequency multiplier
Field kernel_convolve(const Field& h, double t, double N);
// same by direct summation; O(size^2), for small grids only
Field kernel_convolve_direct(const Field& h, double t, double N);

struct MajorArc {
  long q = 1;
  long a = 0;
  double lo(double N) const;
  double hi(double N) const;
  void validate() const;
};

// every a/q with q <= Q and gcd(a, q) = 1, including the arc around 0
std::vector<MajorArc> major_arcs(long Q);

// N^{n+d} / (q^{(n+d)/2} (1 + N^{n+d} |t - a/q|^{(n+d)/2}))
double major_arc_bound(int dim, double N, const MajorArc& arc, double t);

struct ArcRatio {
  MajorArc arc;
  double kernel = 0;    // max |K| / bound
  double majorant = 0;  // max discretized majorant / bound
};

struct MajorArcReport {
  double N = 0;
  double max_ratio = 0;          // over all arcs
  double max_ratio_rational = 0; // arcs with q >= 2 only
  double majorant_ratio = 0;
  std::vector<ArcRatio> arcs;
};

// Samples |K| on each arc at random (x, y); the first sample of each arc is
// x = y = 0, t = a/q. Only n = 1 is supported.
MajorArcReport major_arc_check(int d, double N, const std::vector<MajorArc>& arcs, int sample_count,
                               std::uint64_t seed);

struct KernelDecay {
  FitResult fit;
  std::vector<int> gammas;
  std::vector<double> ratios;
  double horizon = 0;
  bool clipped = false;  // requested range exceeded the horizon
};

struct KernelDecayConfig {
  int n = 1;
  int d = 1;
  double box_length = 512;
  double beta = 1;
  double N = 8;
  int gamma_min = 2;
  int gamma_max = 64;
  double p = 4;
  int torus_modes = 1;  // R
};

// Operator ratio ||K_gamma * h||_{L^p} / ||h||_{L^p'} over the unit time interval for a
// smooth bump datum h with R torus modes, fitted against log gamma. The gamma range is
// clipped by the wrap-around horizon. Infinite p uses the grid sup over the L^1 norm.
KernelDecay kernel_decay_fit(const KernelDecayConfig& cfg);

}  // namespace semidisp
