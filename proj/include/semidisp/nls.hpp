#pragma once

#include <stdexcept>
#include <vector>

#include "semidisp/norms.hpp"
#include "semidisp/spectral.hpp"

namespace semidisp {

struct NlsConfig {
  int sigma = 5;  // F(u) = |u|^{sigma-1} u
  int sign = +1;  // +1 defocusing
  double dt = 0.01;
  double T = 1.0;  // may be negative
  std::vector<double> checkpoints;  // empty means {T}
  bool dealias = true;
  bool nonlinear = true;
  double eta = 0.1;  // small-data threshold in H^{1/2} for Picard and scattering runs
};

class NlsBlowup : public std::runtime_error {
 public:
  NlsBlowup(double t, double amplitude);
  double time() const { return t_; }

 private:
  double t_;
};

// Throws ValidationError naming the offending key.
void validate_nls(const NlsConfig& cfg, const SpectralField& u0);

// Strang splitting; the trajectory holds t = 0 and every checkpoint.
Trajectory split_step_evolve(const Field& u0, const NlsConfig& cfg);

struct PicardResult {
  Trajectory trajectory;          // final iterate at t = 0 and the checkpoints
  std::vector<double> distances;  // sup_t ||Phi^{k+1} - Phi^k||_{H^{1/2}}
  std::vector<double> ratios;     // successive distance ratios
  bool diverged = false;
};

// Iterates Phi(u) = S(t)u0 - sign i int_0^t S(t-s) F(u(s)) ds starting from S(t)u0,
// with V = S(-t)u sampled every dt and the integral by the midpoint rule.
PicardResult picard_iterate(const Field& u0, const NlsConfig& cfg, int iterations);

struct ConservedQuantities {
  double mass = 0;
  double energy = 0;
  double kinetic = 0;    // -sum 2 pi D |u^|^2 * cell
  double potential = 0;  // sign * 2/(sigma+1) * int |u|^{sigma+1}
};

ConservedQuantities conserved(const Field& u, const NlsConfig& cfg);

struct ScatteringProfile {
  std::vector<double> times;   // t_{k+1}
  std::vector<double> drifts;  // ||V(t_{k+1}) - V(t_k)||_{H^{1/2}}
  SpectralField v_plus;        // V at the last checkpoint
};

// V(t) = S(-t)u(t) at the trajectory times after t = 0.
ScatteringProfile scattering_profile(const Trajectory& traj, const NlsConfig& cfg);

}  // namespace semidisp
