#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vadu/projections.hpp"

using namespace vadu;

namespace {

FloatVec random_point(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  FloatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = d(rng);
  return x;
}

// Nearest of many curve samples; a coarse upper bound for nonconvex sets.
template <class Curve>
double sampled_distance(const Curve& curve, const FloatVec& x, int samples = 200000) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = 2 * std::numbers::pi * i / samples;
    best = std::min(best, distance(curve(t), x));
  }
  return best;
}

} // namespace

TEST(Projection, AffineSetsClosedForm) {
  const AffineLine line{FloatVec{0, 1}, FloatVec{2, 0}};
  auto r = project(line, FloatVec{3, 5});
  EXPECT_TRUE(r.unique);
  EXPECT_DOUBLE_EQ(r.point[0], 3);
  EXPECT_DOUBLE_EQ(r.point[1], 1);

  const Hyperplane h{FloatVec{0, 0, 2}, 4};  // z = 2
  r = project(h, FloatVec{1, -1, 7});
  EXPECT_NEAR(r.point[0], 1, 1e-15);
  EXPECT_NEAR(r.point[1], -1, 1e-15);
  EXPECT_NEAR(r.point[2], 2, 1e-15);

  const HalfSpace hs{FloatVec{1, 1}, 1};
  r = project(hs, FloatVec{0, 0});
  EXPECT_EQ(r.point, (FloatVec{0, 0}));  // inside: unchanged
  r = project(hs, FloatVec{2, 2});
  EXPECT_NEAR(r.point[0], 0.5, 1e-15);
  EXPECT_NEAR(r.point[1], 0.5, 1e-15);
}

TEST(Projection, BallAndSphere) {
  const Ball b{FloatVec{1, 1}, 2};
  EXPECT_EQ(project(b, FloatVec{2, 1}).point, (FloatVec{2, 1}));
  auto r = project(b, FloatVec{1, 5});
  EXPECT_NEAR(r.point[1], 3, 1e-15);

  const Sphere s{FloatVec{0, 0, 0}, 2};
  r = project(s, FloatVec{0, 0, 0.5});
  EXPECT_TRUE(r.unique);
  EXPECT_NEAR(r.point[2], 2, 1e-15);
  r = project(s, FloatVec{0, 0, 0});
  EXPECT_FALSE(r.unique);
  EXPECT_TRUE(r.note.has_value());
  EXPECT_EQ(r.point, (FloatVec{2, 0, 0}));
}

TEST(Projection, EllipseOnMajorAxisIsAmbiguous) {
  const Ellipse e{2, 1};
  // Inside the evolute segment |x| < (a^2-b^2)/a = 1.5 the two nearest points
  // are mirror images; the nonnegative y one is selected.
  auto r = project(e, FloatVec{0.6, 0});
  EXPECT_FALSE(r.unique);
  const double px = 4 * 0.6 / 3;
  EXPECT_NEAR(r.point[0], px, 1e-14);
  EXPECT_NEAR(r.point[1], std::sqrt(1 - px * px / 4), 1e-14);
  r = project(e, FloatVec{1.8, 0});
  EXPECT_TRUE(r.unique);
  EXPECT_EQ(r.point, (FloatVec{2, 0}));
  r = project(e, FloatVec{0, -0.3});
  EXPECT_EQ(r.point, (FloatVec{0, -1}));
}

TEST(Projection, EllipseMatchesSampling) {
  const Ellipse e{3, 1.25};
  std::mt19937_64 rng(7);
  for (int i = 0; i < 60; ++i) {
    const FloatVec x = random_point(rng, 2, 4);
    const auto r = project(e, x);
    EXPECT_LT(membership_residual(e, r.point), 1e-11);
    const double sampled = sampled_distance([&](double t) { return FloatVec{3 * std::cos(t), 1.25 * std::sin(t)}; }, x);
    EXPECT_LE(distance(r.point, x), sampled + 1e-12);
    EXPECT_GE(distance(r.point, x), sampled - 1e-4);
  }
}

TEST(Projection, EllipseWithEqualAxesIsACircle) {
  const auto r = project(Ellipse{2, 2}, FloatVec{3, 4});
  EXPECT_NEAR(r.point[0], 1.2, 1e-15);
  EXPECT_NEAR(r.point[1], 1.6, 1e-15);
}

TEST(Projection, PSphereExponentOne) {
  const PSphere p{1};
  auto r = project(p, FloatVec{1, 1});
  EXPECT_NEAR(r.point[0], 0.5, 1e-15);
  EXPECT_NEAR(r.point[1], 0.5, 1e-15);
  r = project(p, FloatVec{-3, 0.5});
  EXPECT_EQ(r.point, (FloatVec{-1, 0}));
  r = project(p, FloatVec{0, 0.2});
  EXPECT_FALSE(r.unique);
}

TEST(Projection, PSphereOrigin) {
  // For p > 2 the unit p-sphere bulges out, so the axis points are nearest.
  auto r = project(PSphere{4}, FloatVec{0, 0});
  EXPECT_FALSE(r.unique);
  EXPECT_EQ(r.point, (FloatVec{1, 0}));
  // For p < 2 the diagonal points are nearest.
  r = project(PSphere{1.5}, FloatVec{0, 0});
  EXPECT_FALSE(r.unique);
  EXPECT_NEAR(r.point[0], r.point[1], 1e-9);
  EXPECT_NEAR(r.point[0], std::pow(0.5, 1 / 1.5), 1e-9);
}

TEST(Projection, PSphereMatchesSampling) {
  std::mt19937_64 rng(9);
  for (double p : {1.3, 3.0, 6.0}) {
    const auto curve = [p](double t) {
      const double c = std::cos(t), s = std::sin(t);
      const double n = std::pow(std::pow(std::abs(c), p) + std::pow(std::abs(s), p), 1 / p);
      return FloatVec{c / n, s / n};
    };
    for (int i = 0; i < 30; ++i) {
      const FloatVec x = random_point(rng, 2, 2);
      const auto r = project(PSphere{p}, x);
      EXPECT_LT(membership_residual(PSphere{p}, r.point), 1e-12);
      const double sampled = sampled_distance(curve, x);
      EXPECT_LE(distance(r.point, x), sampled + 1e-12) << "p=" << p;
      EXPECT_GE(distance(r.point, x), sampled - 1e-4) << "p=" << p;
    }
  }
}

TEST(Projection, VPolytopeTriangle) {
  const VPolytope t{{FloatVec{0, 0}, FloatVec{4, 0}, FloatVec{0, 4}}};
  EXPECT_EQ(project(t, FloatVec{1, 1}).point, (FloatVec{1, 1}));
  auto r = project(t, FloatVec{3, 3});
  EXPECT_NEAR(r.point[0], 2, 1e-12);
  EXPECT_NEAR(r.point[1], 2, 1e-12);
  r = project(t, FloatVec{-1, -2});
  EXPECT_NEAR(r.point.norm(), 0, 1e-15);
  r = project(t, FloatVec{2, -5});
  EXPECT_NEAR(r.point[0], 2, 1e-12);
  EXPECT_NEAR(r.point[1], 0, 1e-12);
}

TEST(Projection, VPolytopeWithRedundantVertices) {
  // Square with a duplicate and an interior point among the generators.
  const VPolytope sq{{FloatVec{0, 0}, FloatVec{1, 0}, FloatVec{1, 1}, FloatVec{0, 1}, FloatVec{0.5, 0.5},
                      FloatVec{1, 1}}};
  const auto r = project(sq, FloatVec{2, 0.25});
  EXPECT_NEAR(r.point[0], 1, 1e-12);
  EXPECT_NEAR(r.point[1], 0.25, 1e-12);
}

// P_C(x) is characterized by <x - P, y - P> <= 0 for all y in C.
TEST(Projection, ConvexVariationalInequality) {
  std::mt19937_64 rng(13);
  const std::vector<SetDescriptor> sets{
      AffineLine{FloatVec{1, 2, 3}, FloatVec{1, -1, 0.5}}, Hyperplane{FloatVec{1, 2, -1}, 0.7},
      HalfSpace{FloatVec{-1, 0.5, 2}, 1}, Ball{FloatVec{0.5, 0, -1}, 1.5},
      VPolytope{{FloatVec{0, 0, 0}, FloatVec{2, 0, 0}, FloatVec{0, 2, 0}, FloatVec{0, 0, 2}, FloatVec{1, 1, 1}}}};
  for (const auto& s : sets) {
    // Members of the set: projections of random points.
    std::vector<FloatVec> members;
    for (int i = 0; i < 50; ++i) members.push_back(project(s, random_point(rng, 3, 5)).point);
    for (int i = 0; i < 50; ++i) {
      const FloatVec x = random_point(rng, 3, 5);
      const FloatVec p = project(s, x).point;
      for (const auto& y : members) EXPECT_LE(dot(x - p, y - p), 1e-9 * (1 + distance(x, p))) << kind_name(s);
    }
  }
}

TEST(Projection, Idempotent) {
  std::mt19937_64 rng(17);
  const std::vector<SetDescriptor> sets{Sphere{FloatVec{1, -1}, 2}, Ellipse{2, 0.5}, PSphere{3},
                                        Ball{FloatVec{0, 0}, 1}, HalfSpace{FloatVec{0, 1}, 0.25}};
  for (const auto& s : sets)
    for (int i = 0; i < 40; ++i) {
      const FloatVec p = project(s, random_point(rng, 2, 3)).point;
      EXPECT_LT(distance(project(s, p).point, p), 1e-9) << kind_name(s);
    }
}

TEST(Reflection, InvolutionOnAffineSets) {
  std::mt19937_64 rng(19);
  const std::vector<SetDescriptor> sets{AffineLine{FloatVec{0, 1}, FloatVec{1, 3}}, Hyperplane{FloatVec{2, -1}, 3}};
  for (const auto& s : sets)
    for (int i = 0; i < 30; ++i) {
      const FloatVec x = random_point(rng, 2, 4);
      EXPECT_LT(distance(reflect(s, reflect(s, x)), x), 1e-12);
      // Reflection is an isometry of an affine subspace's ambient space.
      const FloatVec y = random_point(rng, 2, 4);
      EXPECT_NEAR(distance(reflect(s, x), reflect(s, y)), distance(x, y), 1e-12);
    }
}

TEST(MembershipResidual, ZeroOnSet) {
  EXPECT_NEAR(membership_residual(Sphere{FloatVec{0, 0}, 2}, FloatVec{0, 2}), 0, 1e-15);
  EXPECT_NEAR(membership_residual(Sphere{FloatVec{0, 0}, 2}, FloatVec{0, 3}), 1, 1e-15);
  EXPECT_NEAR(membership_residual(Ellipse{2, 1}, FloatVec{2, 0}), 0, 1e-15);
  EXPECT_NEAR(membership_residual(HalfSpace{FloatVec{1, 0}, 1}, FloatVec{-5, 7}), 0, 1e-15);
  EXPECT_NEAR(membership_residual(HalfSpace{FloatVec{1, 0}, 1}, FloatVec{3, 7}), 2, 1e-15);
  EXPECT_THROW(membership_residual(Ball{FloatVec{0, 0}, 1}, FloatVec{0, 0, 0}), InputError);
}

TEST(Validate, RejectsBadParameters) {
  EXPECT_THROW(validate(AffineLine{FloatVec{0, 0}, FloatVec{0, 0}}), InputError);
  EXPECT_THROW(validate(AffineLine{FloatVec{0, 0}, FloatVec{1, 0, 0}}), InputError);
  EXPECT_THROW(validate(Hyperplane{FloatVec{0, 0}, 1}), InputError);
  EXPECT_THROW(validate(HalfSpace{FloatVec{1, 0}, std::numeric_limits<double>::infinity()}), InputError);
  EXPECT_THROW(validate(Sphere{FloatVec{0, 0}, 0}), InputError);
  EXPECT_THROW(validate(Ball{FloatVec{0, 0}, -1}), InputError);
  EXPECT_THROW(validate(Ellipse{1, 2}), InputError);
  EXPECT_THROW(validate(Ellipse{1, 0}), InputError);
  EXPECT_THROW(validate(PSphere{0.5}), InputError);
  EXPECT_THROW(validate(VPolytope{}), InputError);
  EXPECT_THROW(validate(VPolytope{{FloatVec{0, 0}, FloatVec{1}}}), InputError);
  EXPECT_NO_THROW(validate(Ellipse{2, 2}));
  EXPECT_NO_THROW(validate(PSphere{1}));
}

TEST(Projection, DimensionMismatchAndNonFinite) {
  EXPECT_THROW(project(Ball{FloatVec{0, 0}, 1}, FloatVec{1, 2, 3}), InputError);
  EXPECT_THROW(project(Ellipse{2, 1}, FloatVec{1}), InputError);
  FloatVec bad(2);
  bad[0] = std::nan("");
  EXPECT_THROW(project(Ball{FloatVec{0, 0}, 1}, bad), InputError);
}
