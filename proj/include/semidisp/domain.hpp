#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace semidisp {

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Frequencies per axis in FFT layout. Axis order follows storage:
// torus axes first (outermost), Euclidean axes last (innermost, contiguous).
struct FrequencyLattice {
  std::vector<Eigen::ArrayXd> euclid_freqs;  // xi = k / L
  std::vector<Eigen::ArrayXi> torus_freqs;   // integer m
  std::vector<Eigen::ArrayXd> axis_dispersion;  // per storage axis: xi^2 or beta^2 m^2
  Eigen::ArrayXd dispersion;                     // |xi|^2 + sum beta^2 m^2
};

struct Domain {
  int n = 0;
  int d = 0;
  std::vector<double> box_lengths;
  std::vector<double> torus_weights;
  std::vector<int> grid_sizes;  // Euclidean sizes then torus sizes
  FrequencyLattice lattice;

  std::size_t size() const;
  int rank() const { return n + d; }
  // storage shape: torus sizes then Euclidean sizes
  std::vector<int> shape() const;
  int euclid_axis(int i) const { return d + i; }
  int torus_axis(int j) const { return j; }
  bool is_euclid_axis(int a) const { return a >= d; }
  int axis_size(int a) const { return shape()[a]; }
  double cell_volume() const;     // physical Riemann-sum weight
  double spectral_cell() const;   // prod 1/L_i
  double volume() const;          // prod L_i (torus has unit measure)
  // largest representable |frequency| on storage axis a (beta-scaled on torus axes)
  double max_frequency(int a) const;
};

using DomainPtr = std::shared_ptr<const Domain>;

DomainPtr build_domain(int n, int d, std::vector<double> box_lengths,
                       std::vector<double> torus_weights, std::vector<int> grid_sizes);

double nyquist_margin(const Domain& domain, double N);
// per-axis bandwidths in storage order
double nyquist_margin(const Domain& domain, const std::vector<double>& bandwidth);

// smallest power-of-two grid (>= 4) per axis with margin >= `margin` for the given
// per-axis bandwidths (Euclidean sizes then torus sizes, matching grid_sizes).
std::vector<int> auto_grid(int n, int d, const std::vector<double>& box_lengths,
                           const std::vector<double>& torus_weights,
                           const std::vector<double>& euclid_bandwidth,
                           const std::vector<double>& torus_bandwidth, double margin);

bool is_power_of_two(long v);

// flat index <-> per-axis index in storage order
std::vector<int> unravel(const Domain& domain, std::size_t flat);
std::size_t ravel(const Domain& domain, const std::vector<int>& idx);
// signed FFT frequency index for position i on an axis of size g
inline int signed_index(int i, int g) { return i < g / 2 ? i : i - g; }
inline int fft_position(int k, int g) { return k >= 0 ? k : k + g; }

}  // namespace semidisp
