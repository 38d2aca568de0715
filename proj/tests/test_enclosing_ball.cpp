#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vadu/enclosing_ball.hpp"

using namespace vadu;

namespace {

PointSet random_set(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> d(0, 1);
  PointSet s;
  for (std::size_t i = 0; i < n; ++i) {
    FloatVec p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = d(rng);
    s.points.push_back(p);
  }
  return s;
}

// The minimax objective is convex, so a center no random nearby probe can
// improve on is globally optimal (up to the probe radius).
double best_probe_gain(const PointSet& s, const FloatVec& c, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0, 1);
  const double base = minimax_objective(s, c);
  double gain = 0;
  for (double step : {1e-2, 1e-4, 1e-6})
    for (int i = 0; i < 200; ++i) {
      FloatVec probe = c;
      for (std::size_t k = 0; k < c.dim(); ++k) probe[k] += step * d(rng);
      gain = std::max(gain, base - minimax_objective(s, probe));
    }
  return gain;
}

} // namespace

TEST(MEB, UnitSquare) {
  const PointSet s{{FloatVec{0, 0}, FloatVec{1, 0}, FloatVec{1, 1}, FloatVec{0, 1}}};
  const auto b = solve_meb(s);
  EXPECT_NEAR(b.center[0], 0.5, 1e-15);
  EXPECT_NEAR(b.center[1], 0.5, 1e-15);
  EXPECT_NEAR(b.radius, std::sqrt(0.5), 1e-15);
  EXPECT_TRUE(hull_certificate(s, b));
}

TEST(MEB, SmallCases) {
  auto b = solve_meb(PointSet{{FloatVec{2, 3, 4}}});
  EXPECT_EQ(b.radius, 0);
  EXPECT_EQ(b.center, (FloatVec{2, 3, 4}));

  b = solve_meb(PointSet{{FloatVec{0, 0}, FloatVec{4, 0}}});
  EXPECT_NEAR(b.center[0], 2, 1e-15);
  EXPECT_NEAR(b.radius, 2, 1e-15);

  // Obtuse triangle: the long side's midpoint, not the circumcenter.
  b = solve_meb(PointSet{{FloatVec{0, 0}, FloatVec{10, 0}, FloatVec{5, 1}}});
  EXPECT_NEAR(b.center[0], 5, 1e-12);
  EXPECT_NEAR(b.center[1], 0, 1e-12);
  EXPECT_NEAR(b.radius, 5, 1e-12);

  // Equilateral triangle: circumcenter at the centroid.
  const double h = std::sqrt(3.0);
  b = solve_meb(PointSet{{FloatVec{-1, 0}, FloatVec{1, 0}, FloatVec{0, h}}});
  EXPECT_NEAR(b.center[1], h / 3, 1e-12);
  EXPECT_NEAR(b.radius, 2 * h / 3, 1e-12);
}

TEST(MEB, CollinearAndDuplicatePoints) {
  const PointSet s{{FloatVec{1, 1}, FloatVec{2, 2}, FloatVec{-3, -3}, FloatVec{2, 2}, FloatVec{0, 0}}};
  const auto b = solve_meb(s);
  EXPECT_NEAR(b.center[0], -0.5, 1e-12);
  EXPECT_NEAR(b.center[1], -0.5, 1e-12);
  EXPECT_NEAR(b.radius, 2.5 * std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(hull_certificate(s, b));
}

TEST(MEB, MatchesBruteForceAndProbes) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 1 + trial % 4;
    const PointSet s = random_set(rng, 2 + trial % 10, dim);
    const auto b = solve_meb(s, trial);
    const auto o = brute_force_meb(s);
    EXPECT_NEAR(b.radius, o.radius, 1e-9);
    EXPECT_LT(distance(b.center, o.center), 1e-9);
    EXPECT_NEAR(minimax_objective(s, b.center), b.radius, 1e-12);
    EXPECT_LT(best_probe_gain(s, b.center, rng), 1e-12);
    EXPECT_TRUE(hull_certificate(s, b)) << "trial " << trial;
  }
}

TEST(MEB, SeedOnlyAffectsRounding) {
  std::mt19937_64 rng(8);
  const PointSet s = random_set(rng, 500, 3);
  const auto a = solve_meb(s, 0);
  for (std::uint64_t seed : {1, 2, 77}) {
    const auto b = solve_meb(s, seed);
    EXPECT_NEAR(a.radius, b.radius, 1e-12);
    EXPECT_LT(distance(a.center, b.center), 1e-9);
  }
  EXPECT_TRUE(hull_certificate(s, a));
}

TEST(MEB, CertificateRejectsSuboptimalBall) {
  const PointSet s{{FloatVec{0, 0}, FloatVec{1, 0}, FloatVec{1, 1}, FloatVec{0, 1}}};
  // Encloses all points but is centered off the optimum: the only contact
  // point is (0,0), whose hull does not contain the center.
  const EnclosingBall off{FloatVec{0.6, 0.6}, std::sqrt(0.72)};
  EXPECT_GE(off.radius, minimax_objective(s, off.center) - 1e-15);
  EXPECT_FALSE(hull_certificate(s, off));
  // No contact points at all.
  EXPECT_FALSE(hull_certificate(s, EnclosingBall{FloatVec{0.5, 0.5}, 5}));
}

TEST(MEB, Validation) {
  EXPECT_THROW(solve_meb(PointSet{}), InputError);
  EXPECT_THROW(solve_meb(PointSet{{FloatVec{0, 0}, FloatVec{1}}}), InputError);
  EXPECT_THROW(solve_meb(PointSet{{FloatVec()}}), InputError);
  std::mt19937_64 rng(1);
  EXPECT_THROW(brute_force_meb(random_set(rng, kBruteForceMebLimit + 1, 2)), InputError);
}
