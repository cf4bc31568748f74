#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "semidisp/spectral.hpp"

namespace semidisp {

struct ExponentSet {
  int n = 0;
  int d = 0;
  double p = 0;
  double p_star = 0;  // 2(n+d+2)/(n+d)
  double q = 0;       // 4p/(n(p-2)); infinite when n = 0
  double alpha = 0;   // (n+d)/2 - (n+d+2)/p
  double q_adm = 0;   // 2/q_adm + n/p = n/2
  double mu = 0;      // n(p-2)/(2p)
  bool above_endpoint = false;  // p >= p*
  bool q_above_two = false;
};

ExponentSet exponent_table(int n, int d, double p);

double lp_space_norm(const Field& field, double p);
// sum |u|^p * cell, or max |u| when p is infinite
double lp_pow_sum(const Eigen::ArrayXcd& values, double p, double cell);

enum class WindowKind { overlapping, disjoint };

struct WindowGrid {
  int gamma_max = 0;
  WindowKind kind = WindowKind::overlapping;
  int samples_per_window = 32;

  std::pair<double, double> window(int gamma) const {
    return kind == WindowKind::overlapping ? std::pair{gamma - 1.0, gamma + 1.0}
                                           : std::pair{double(gamma), gamma + 1.0};
  }
  double length() const { return kind == WindowKind::overlapping ? 2.0 : 1.0; }
  void validate() const;
};

struct MixedNorm {
  double value = 0;
  std::vector<int> gammas;
  std::vector<double> window_norms;
  bool tail_flag = false;  // outermost windows carry > 1e-6 of the total
};

class InsufficientSampling : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> fields;
};

double window_lp_norm(const Trajectory& traj, double p, double a, double b, int n_t);
MixedNorm mixed_norm(const Trajectory& traj, double p, double q, const WindowGrid& grid);
// l^q combination of window norms, in window order
MixedNorm combine_windows(std::vector<int> gammas, std::vector<double> norms, double q);

double discrete_hls_sum(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double mu);
double discrete_hls_sum_direct(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double mu);
double discrete_hls_ratio(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double mu, double p,
                          double q);

template <typename Derived>
typename Derived::Scalar lp_sequence_norm(const Eigen::ArrayBase<Derived>& a, typename Derived::Scalar p) {
  using std::pow;
  return pow(a.abs().pow(p).sum(), typename Derived::Scalar(1) / p);
}

}  // namespace semidisp
