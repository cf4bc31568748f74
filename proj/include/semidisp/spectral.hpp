#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "semidisp/domain.hpp"

namespace semidisp {

struct Field {
  DomainPtr domain;
  Eigen::ArrayXcd values;  // physical grid, storage order
};

// Continuum-normalized coefficients: DFT times cell width on Euclidean axes
// (with the x = -L/2 origin phase), plain discrete coefficients on torus axes.
struct SpectralField {
  DomainPtr domain;
  Eigen::ArrayXcd coeffs;
};

SpectralField to_spectral(const Field& field);
Field from_spectral(const SpectralField& spec);

Field zero_field(DomainPtr domain);
SpectralField zero_spectrum(DomainPtr domain);

double l2_norm(const Field& field);
double l2_norm(const SpectralField& spec);
double hs_norm(const Field& field, double s);
double hs_norm(const SpectralField& spec, double s);
double inner_product_real(const SpectralField& a, const SpectralField& b);
std::complex<double> inner_product(const SpectralField& a, const SpectralField& b);

// Data families. The *_spectrum variants skip the physical round trip.
SpectralField random_spectrum(DomainPtr domain, double N, std::uint64_t seed);
SpectralField focusing_spectrum(DomainPtr domain, double N);
SpectralField gaussian_x_spectrum(DomainPtr domain, double lambda);
Field random_field(DomainPtr domain, double N, std::uint64_t seed);
Field focusing_field(DomainPtr domain, double N);
Field gaussian_x_field(DomainPtr domain, double lambda);

// Single lattice mode at Euclidean index k and torus mode m with given amplitude
// in physical space: u = A e^{2 pi i (x.xi_k + y.m)}.
SpectralField plane_wave_spectrum(DomainPtr domain, const std::vector<int>& k,
                                  const std::vector<int>& m, std::complex<double> amplitude);

using TorusMode = std::pair<std::vector<int>, std::complex<double>>;
// Gaussian envelope exp(-pi |x|^2 / w^2) in x, band-limited to |xi| <= band, times the
// listed torus modes.
SpectralField packet_spectrum(DomainPtr domain, double width, double band,
                              const std::vector<TorusMode>& modes);

// Largest |xi| and largest beta|m| over the support; coefficients below 1e-13 of
// the peak count as rounding residue.
double euclid_bandwidth(const SpectralField& spec);
double torus_bandwidth(const SpectralField& spec);
// max - min dispersion over the support
double dispersion_spread(const SpectralField& spec);
bool is_real_spectrum(const SpectralField& spec);

void write_csv(const Field& field, std::ostream& os);

}  // namespace semidisp
