#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "semidisp/norms.hpp"
#include "semidisp/propagator.hpp"
#include "semidisp/rng.hpp"

using namespace semidisp;

namespace {
double rel_diff(const Eigen::ArrayXcd& a, const Eigen::ArrayXcd& b) {
  return std::sqrt((a - b).abs2().sum() / b.abs2().sum());
}
DomainPtr small_domain() { return build_domain(1, 1, {16}, {1}, {512, 32}); }
}  // namespace

TEST(LpProfile, ShapeAndMonotone) {
  EXPECT_EQ(lp_profile(0.0), 1.0);
  EXPECT_EQ(lp_profile(1.0), 1.0);
  EXPECT_EQ(lp_profile(2.0), 0.0);
  EXPECT_EQ(lp_profile(3.0), 0.0);
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 0.01) {
    const double v = lp_profile(r);
    EXPECT_LE(v, prev + 1e-15);
    EXPECT_GE(v, 0.0);
    prev = v;
  }
  EXPECT_NEAR(lp_profile(1.5f), std::exp(1.0 - 1.0 / 0.75), 1e-6);
}

TEST(Evolve, IdentityAtZero) {
  auto s = random_spectrum(small_domain(), 4, 1);
  EXPECT_TRUE((evolve(s, 0.0).coeffs == s.coeffs).all());
}

TEST(Evolve, SingleModePhase) {
  auto dom = small_domain();
  auto s = plane_wave_spectrum(dom, {0}, {3}, 1.0);
  const double t = 0.123;
  auto e = evolve(s, t);
  const Eigen::Index i = 3 * 512;
  EXPECT_LT(std::abs(e.coeffs[i] - s.coeffs[i] * std::polar(1.0, 2 * std::numbers::pi * t * 9)), 1e-12 * std::abs(s.coeffs[i]));
}

TEST(Evolve, UnitarityGroupLawTimeReversal) {
  auto dom = small_domain();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = random_spectrum(dom, 4, seed);
    for (double t : {0.1, 1.0, 10.0})
      EXPECT_NEAR(l2_norm(evolve(f, t)), l2_norm(f), 1e-12);
    EXPECT_LT(rel_diff(evolve(evolve(f, 0.3), 1.7).coeffs, evolve(f, 2.0).coeffs), 1e-12);
    // conjugation in physical space
    Field u = from_spectral(f);
    Field uc{dom, u.values.conjugate()};
    Field lhs = from_spectral(evolve(to_spectral(uc), 0.7));
    Field rhs = from_spectral(evolve(f, -0.7));
    EXPECT_LT(rel_diff(lhs.values, rhs.values.conjugate()), 1e-12);
  }
}

TEST(Horizon, Examples) {
  EXPECT_DOUBLE_EQ(wraparound_horizon(*build_domain(1, 0, {64}, {}, {64}), 4), 2.0);
  EXPECT_DOUBLE_EQ(wraparound_horizon(*build_domain(1, 0, {256}, {}, {64}), 4), 8.0);
  EXPECT_TRUE(std::isinf(wraparound_horizon(*build_domain(0, 2, {}, {1, 1}, {8, 8}), 4)));
}

TEST(Horizon, DoublingBoxKeepsNormsInsideHorizon) {
  // a packet evolved to the horizon looks the same in a box twice as large
  auto norm_at = [](double L, double t) {
    auto g = auto_grid(1, 1, {L}, {1}, {2}, {2}, 1.0);
    auto dom = build_domain(1, 1, {L}, {1}, g);
    auto s = packet_spectrum(dom, 1.0, 2.0, {{{0}, 1.0}, {{1}, 0.5}});
    return lp_space_norm(from_spectral(evolve(s, t)), 6.0);
  };
  const double L = 64;
  const double T = L / 16.0;  // horizon for bandwidth 2
  EXPECT_NEAR(norm_at(L, T), norm_at(2 * L, T), 1e-6 * norm_at(2 * L, T));
}

TEST(LpProject, IdentityOnBandLimited) {
  auto dom = small_domain();
  auto f = random_spectrum(dom, 2, 3);
  EXPECT_TRUE((lp_project(f, 4, LpMode::leq).coeffs == f.coeffs).all());
}

TEST(LpProject, Telescoping) {
  auto dom = small_domain();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Field noise = random_field(dom, 7, seed);
    auto f = to_spectral(noise);
    Eigen::ArrayXcd sum = lp_project(f, 1, LpMode::leq).coeffs;
    for (double M = 2; M <= 8; M *= 2) sum += lp_project(f, M, LpMode::annulus).coeffs;
    EXPECT_LT(rel_diff(sum, lp_project(f, 8, LpMode::leq).coeffs), 1e-12);
  }
}

TEST(LpProject, SeparatedAnnuliOrthogonal) {
  auto dom = small_domain();
  auto f = random_spectrum(dom, 7, 11);
  auto a = lp_project(f, 1.5, LpMode::annulus);
  auto b = lp_project(f, 6, LpMode::annulus);
  EXPECT_EQ(std::abs(inner_product(a, b)), 0.0);
}

TEST(LpProject, IdempotentOnPlateau) {
  auto dom = small_domain();
  auto f = random_spectrum(dom, 3, 2);
  auto once = lp_project(f, 3, LpMode::leq);
  EXPECT_LT(rel_diff(lp_project(once, 3, LpMode::leq).coeffs, once.coeffs), 1e-12);
}

TEST(XProject, IdentityAndCommutation) {
  auto dom = small_domain();
  auto f = random_spectrum(dom, 3, 4);
  EXPECT_TRUE((x_project(f, 6).coeffs == f.coeffs).all());
  auto g = random_spectrum(dom, 7, 5);
  EXPECT_LT(rel_diff(x_project(evolve(g, 0.37), 2).coeffs, evolve(x_project(g, 2), 0.37).coeffs), 1e-12);
  EXPECT_LT(rel_diff(x_project(lp_project(g, 4, LpMode::leq), 2).coeffs,
                     lp_project(x_project(g, 2), 4, LpMode::leq).coeffs),
            1e-12);
}

TEST(XProject, RectangleSupBound) {
  for (auto [M, N] : {std::pair{2.0, 16.0}, std::pair{4.0, 32.0}}) {
    auto g = auto_grid(1, 1, {16}, {1}, {2 * N}, {2 * N}, 1.0);
    auto dom = build_domain(1, 1, {16}, {1}, g);
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto f = random_spectrum(dom, 2 * N, seed);
      Field u = from_spectral(x_project(lp_project(f, N, LpMode::leq), M));
      worst = std::max(worst, u.values.abs().maxCoeff() / (std::sqrt(M * N) * l2_norm(f)));
    }
    EXPECT_LE(worst, 4.0);
  }
}

TEST(Caps, CountMatchesLatticeEnumeration) {
  auto dom = build_domain(1, 1, {64}, {1}, {1024, 32});
  auto caps = cap_cover(*dom, 4);
  EXPECT_EQ(caps.size(), 57u);
  // independent: distinct (m, cube) labels of fine-lattice points in the ball
  std::set<std::pair<int, int>> labels;
  for (int m = -4; m <= 4; ++m)
    for (int k = -300; k <= 300; ++k) {
      const double xi = k / 64.0;
      if (xi * xi + m * m <= 16.0) labels.insert({m, cap_cube(xi)});
    }
  EXPECT_EQ(labels.size(), caps.size());
  for (const Cap& c : caps) EXPECT_TRUE(labels.count({c.m[0], c.k[0]}));
}

TEST(Caps, ReconstructionAndOrthogonality) {
  auto dom = small_domain();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto g = random_spectrum(dom, 4, seed);
    auto caps = cap_cover(*dom, 4);
    Eigen::ArrayXcd sum = Eigen::ArrayXcd::Zero(g.coeffs.size());
    std::vector<SpectralField> parts;
    for (const Cap& c : caps) {
      parts.push_back(cap_project(g, c));
      sum += parts.back().coeffs;
      EXPECT_TRUE((cap_project(parts.back(), c).coeffs == parts.back().coeffs).all());
    }
    EXPECT_TRUE((sum == g.coeffs).all());
    for (std::size_t i = 0; i < caps.size(); ++i)
      for (std::size_t j = i + 1; j < caps.size(); ++j)
        if (caps[i].m != caps[j].m) EXPECT_EQ(std::abs(inner_product(parts[i], parts[j])), 0.0);
  }
}
