#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "semidisp/fit.hpp"
#include "semidisp/nls.hpp"
#include "semidisp/propagator.hpp"

using namespace semidisp;

namespace {

double rel_l2(const Field& a, const Field& b) {
  return std::sqrt((a.values - b.values).abs2().sum() / b.values.abs2().sum());
}

Field packet(DomainPtr dom, double band, double hhalf) {
  SpectralField s = packet_spectrum(dom, 1.0, band, {{{0}, 1.0}, {{1}, 0.5}, {{-1}, std::complex<double>(0, 0.3)}});
  s.coeffs *= hhalf / hs_norm(s, 0.5);
  return from_spectral(s);
}

NlsConfig quintic(double dt, double T) {
  NlsConfig c;
  c.sigma = 5;
  c.dt = dt;
  c.T = T;
  return c;
}

}  // namespace

TEST(SplitStep, ZeroDataStaysZero) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const auto traj = split_step_evolve(zero_field(dom), quintic(0.01, 0.1));
  ASSERT_EQ(traj.fields.size(), 2u);
  EXPECT_EQ(traj.fields.back().values.abs().maxCoeff(), 0.0);
}

TEST(SplitStep, PlaneWaveExactSolution) {
  const auto dom = build_domain(2, 1, {8, 8}, {1}, {8, 8, 8});
  const double A = 0.3;
  const int m = 1;
  const Field u0 = from_spectral(plane_wave_spectrum(dom, {0, 0}, {m}, A));
  NlsConfig cfg;
  cfg.sigma = 3;
  cfg.dt = 1e-3;
  cfg.T = 1.0;
  for (int sign : {1, -1}) {
    cfg.sign = sign;
    const Field u = split_step_evolve(u0, cfg).fields.back();
    const std::complex<double> phase = unit_phase(m * m * 1.0) * std::polar(1.0, -sign * A * A * 1.0);
    Field exact = u0;
    exact.values *= phase;
    EXPECT_LT((u.values - exact.values).abs().maxCoeff(), 1e-8) << sign;
  }
}

TEST(SplitStep, MassConservedOnWellResolvedGrid) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const Field u0 = packet(dom, 1.0, 0.3);
  const auto traj = split_step_evolve(u0, quintic(0.01, 1.0));
  const double m0 = conserved(u0, quintic(0.01, 1.0)).mass;
  const double m1 = conserved(traj.fields.back(), quintic(0.01, 1.0)).mass;
  EXPECT_LT(std::abs(m1 - m0) / m0, 1e-10);
}

TEST(SplitStep, StrangSecondOrderOnPacket) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const Field u0 = packet(dom, 1.0, 0.3);
  NlsConfig ref = quintic(1e-3 / 8, 1.0);
  ref.dealias = false;
  const Field exact = split_step_evolve(u0, ref).fields.back();
  std::vector<double> dts{4e-3, 2e-3, 1e-3}, errs;
  for (double dt : dts) {
    NlsConfig c = quintic(dt, 1.0);
    c.dealias = false;
    errs.push_back(rel_l2(split_step_evolve(u0, c).fields.back(), exact));
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    x.push_back(std::log2(dts[i]));
    y.push_back(std::log2(errs[i]));
  }
  EXPECT_NEAR(fit_line(x, y).slope, 2.0, 0.2);
}

TEST(SplitStep, EnergyDriftSecondOrder) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const Field u0 = packet(dom, 1.0, 0.3);
  auto drift = [&](double dt) {
    const NlsConfig c = quintic(dt, 1.0);
    return std::abs(conserved(split_step_evolve(u0, c).fields.back(), c).energy - conserved(u0, c).energy);
  };
  const double r = drift(0.02) / drift(0.01);
  EXPECT_NEAR(r, 4.0, 0.8);
}

TEST(SplitStep, LinearFlowKeepsQuadraticEnergy) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const Field u0 = packet(dom, 1.0, 1.0);
  NlsConfig c = quintic(0.01, 1.0);
  c.nonlinear = false;
  const auto e0 = conserved(u0, c);
  const auto e1 = conserved(split_step_evolve(u0, c).fields.back(), c);
  EXPECT_EQ(e0.potential, 0.0);
  EXPECT_LT(std::abs(e1.energy - e0.energy), 1e-10 * std::abs(e0.energy));
}

TEST(SplitStep, PlaneWaveMassAndEnergy) {
  const auto dom = build_domain(2, 1, {4, 4}, {1}, {8, 8, 8});
  const Field u = from_spectral(plane_wave_spectrum(dom, {0, 0}, {1}, 0.1));
  NlsConfig c;
  c.sigma = 3;
  const auto q = conserved(u, c);
  EXPECT_NEAR(q.mass, 0.01 * dom->volume(), 1e-14);
  EXPECT_NEAR(q.kinetic, -2.0 * M_PI * 0.01 * dom->volume(), 1e-13);
  EXPECT_NEAR(q.potential, 0.5 * 1e-4 * dom->volume(), 1e-15);
}

TEST(SplitStep, GaugeSymmetry) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const Field u0 = packet(dom, 1.0, 0.5);
  Field v0 = u0;
  const auto g = std::polar(1.0, 0.7);
  v0.values *= g;
  const NlsConfig c = quintic(0.01, 0.5);
  Field a = split_step_evolve(u0, c).fields.back();
  const Field b = split_step_evolve(v0, c).fields.back();
  a.values *= g;
  EXPECT_LT((a.values - b.values).abs().maxCoeff(), 1e-12 * a.values.abs().maxCoeff());
}

TEST(SplitStep, TimeReversalConjugatesRealData) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  SpectralField s = packet_spectrum(dom, 1.0, 1.0, {{{1}, 0.5}, {{-1}, 0.5}, {{0}, 1.0}});
  Field u0 = from_spectral(s);
  u0.values = u0.values.real().cast<std::complex<double>>();
  const Field fwd = split_step_evolve(u0, quintic(0.01, 0.5)).fields.back();
  const Field bwd = split_step_evolve(u0, quintic(0.01, -0.5)).fields.back();
  EXPECT_LT((fwd.values.conjugate() - bwd.values).abs().maxCoeff(), 1e-12);
}

TEST(SplitStep, StepHalvingSelfConsistent) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const Field u0 = packet(dom, 1.0, 0.05);
  const Field a = split_step_evolve(u0, quintic(0.01, 1.0)).fields.back();
  const Field b = split_step_evolve(u0, quintic(0.005, 1.0)).fields.back();
  EXPECT_LT(std::sqrt((a.values - b.values).abs2().sum() * dom->cell_volume()), 1e-6);
}

TEST(NlsValidation, RejectsBadConfigs) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const Field u0 = packet(dom, 1.0, 0.05);
  NlsConfig c = quintic(0.2, 1.0);
  EXPECT_THROW(split_step_evolve(u0, c), ValidationError);
  c = quintic(0.01, 1.0);
  c.sigma = 3;
  EXPECT_THROW(split_step_evolve(u0, c), ValidationError);
  c = quintic(0.01, 8.0);  // horizon 32 / 8 = 4
  EXPECT_THROW(split_step_evolve(u0, c), ValidationError);
  const auto coarse = build_domain(1, 1, {32}, {1}, {128, 16});
  EXPECT_THROW(split_step_evolve(packet(coarse, 1.0, 0.05), quintic(0.01, 1.0)), ValidationError);
}

TEST(NlsBlowupDetection, FocusingLargeDataAborts) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const Field u0 = packet(dom, 1.0, 1e7);
  NlsConfig c = quintic(0.01, 1.0);
  c.sign = -1;
  EXPECT_THROW(split_step_evolve(u0, c), NlsBlowup);
}

TEST(Picard, ZeroDataGivesZero) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const auto r = picard_iterate(zero_field(dom), quintic(0.01, 0.2), 1);
  EXPECT_EQ(r.distances.front(), 0.0);
  EXPECT_EQ(r.trajectory.fields.back().values.abs().maxCoeff(), 0.0);
}

TEST(Picard, ContractsAndMatchesSplitStep) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  const Field u0 = packet(dom, 2.0, 0.05);
  const NlsConfig c = quintic(0.01, 1.0);
  const auto r = picard_iterate(u0, c, 3);
  ASSERT_EQ(r.ratios.size(), 2u);
  EXPECT_LE(r.ratios[0], 0.5);
  EXPECT_FALSE(r.diverged);
  const Field ref = split_step_evolve(u0, quintic(0.001, 1.0)).fields.back();
  EXPECT_LT(rel_l2(r.trajectory.fields.back(), ref), 1e-3);
}

TEST(Picard, RejectsLargeData) {
  const auto dom = build_domain(1, 1, {32}, {1}, {512, 16});
  EXPECT_THROW(picard_iterate(packet(dom, 2.0, 1.0), quintic(0.01, 1.0), 2), ValidationError);
}

TEST(Scattering, LinearFlowHasNoDrift) {
  const auto dom = build_domain(1, 1, {128}, {1}, {2048, 16});
  const Field u0 = packet(dom, 2.0, 0.05);
  NlsConfig c = quintic(0.01, 4.0);
  c.checkpoints = {1, 2, 4};
  c.nonlinear = false;
  const auto prof = scattering_profile(split_step_evolve(u0, c), c);
  ASSERT_EQ(prof.drifts.size(), 2u);
  for (double d : prof.drifts) EXPECT_LE(d, 1e-10);
  EXPECT_LT((prof.v_plus.coeffs - to_spectral(u0).coeffs).abs().maxCoeff(), 1e-10);
}
