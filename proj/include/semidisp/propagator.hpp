#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "semidisp/spectral.hpp"

namespace semidisp {

// psi = 1 on [0,1], 0 on [2,inf), smooth monotone bridge in between.
template <typename Scalar>
Scalar lp_profile(Scalar r) {
  using std::exp;
  if (r <= Scalar(1)) return Scalar(1);
  if (r >= Scalar(2)) return Scalar(0);
  const Scalar s = r - Scalar(1);
  return exp(Scalar(1) - Scalar(1) / (Scalar(1) - s * s));
}

// e^{2 pi i phase} with the phase reduced mod 1 first
inline std::complex<double> unit_phase(double phase) {
  const double f = phase - std::floor(phase);
  return std::polar(1.0, 2.0 * M_PI * f);
}

// per storage axis: e^{2 pi i t D_a}
std::vector<Eigen::ArrayXcd> evolution_factors(const Domain& domain, double t);

SpectralField evolve(const SpectralField& spec, double t);
Field evolve(const Field& field, double t);

// min L_i / (8 N) for a real bandwidth N > 0; infinite without Euclidean axes.
double wraparound_horizon(const Domain& domain, double N);

enum class LpMode { leq, annulus };

Eigen::ArrayXd lp_multiplier(const Domain& domain, double N, LpMode mode);
SpectralField lp_project(const SpectralField& spec, double N, LpMode mode);
SpectralField x_project(const SpectralField& spec, double M);

struct Cap {
  std::vector<int> m;  // torus mode
  std::vector<int> k;  // Euclidean unit cube [k - 1/2, k + 1/2)
  bool operator==(const Cap&) const = default;
};

// Unit cubes times single torus modes meeting the ball of dispersion <= N^2,
// enumerated with m outer and k inner, both lexicographic from the most negative value.
std::vector<Cap> cap_cover(const Domain& domain, double N);
SpectralField cap_project(const SpectralField& spec, const Cap& cap);
// cube index of a Euclidean frequency
inline int cap_cube(double xi) { return static_cast<int>(std::floor(xi + 0.5)); }

}  // namespace semidisp
