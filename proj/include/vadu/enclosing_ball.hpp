#pragma once

// Minimal enclosing ball min_x max_i ||a_i - x|| (Euclidean), solved by
// Welzl's move-to-front recursion, with an exhaustive boundary-subset oracle.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <list>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "vadu/errors.hpp"
#include "vadu/float_vec.hpp"
#include "vadu/hull.hpp"
#include "vadu/rational.hpp"

namespace vadu {

struct PointSet {
  std::vector<FloatVec> points;

  std::size_t dim() const { return points.empty() ? 0 : points.front().dim(); }
  void validate() const {
    if (points.empty()) throw InputError("point set is empty");
    if (dim() == 0) throw InputError("points must have dimension >= 1");
    for (const auto& p : points) {
      if (p.dim() != dim()) throw InputError("points have inconsistent dimension");
      if (!p.all_finite()) throw InputError("point has a non-finite coordinate");
    }
  }
};

struct EnclosingBall {
  FloatVec center;
  double radius = 0;
};

inline double minimax_objective(const PointSet& s, const FloatVec& x) {
  double r = 0;
  for (const auto& a : s.points) {
    require_same_dim(a, x, "minimax_objective");
    r = std::max(r, distance(a, x));
  }
  return r;
}

namespace detail {

// Smallest ball with all of `support` on its boundary, i.e. the circumcenter
// within their affine hull. Empty optional when the points are affinely
// dependent.
inline std::optional<EnclosingBall> circumball(const std::vector<FloatVec>& support) {
  const FloatVec& p0 = support.front();
  const std::size_t n = p0.dim();
  const auto k = static_cast<Eigen::Index>(support.size() - 1);
  if (k == 0) return EnclosingBall{p0, 0.0};
  Eigen::MatrixXd d(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) d(i, j) = support[j + 1][i] - p0[i];
  const Eigen::MatrixXd gram = d.transpose() * d;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(1e-12);
  if (lu.rank() < k) return std::nullopt;
  const Eigen::VectorXd alpha = lu.solve(0.5 * gram.diagonal());
  const Eigen::VectorXd off = d * alpha;
  FloatVec c(p0);
  for (std::size_t i = 0; i < n; ++i) c[i] += off[i];
  double r = 0;
  for (const auto& p : support) r = std::max(r, distance(p, c));
  return EnclosingBall{c, r};
}

inline bool ball_contains(const EnclosingBall& b, const FloatVec& p) {
  return b.radius >= 0 && distance(p, b.center) <= b.radius * (1 + 1e-12) + 1e-15;
}

class WelzlSolver {
public:
  WelzlSolver(std::vector<FloatVec> pts) : pts_(std::move(pts)), dim_(pts_.front().dim()) {
    for (std::size_t i = 0; i < pts_.size(); ++i) order_.push_back(i);
    ball_ = {FloatVec(dim_), -1.0};
  }

  EnclosingBall solve() {
    move_to_front(order_.end());
    return ball_;
  }

private:
  void set_support_ball() {
    if (support_.empty()) {
      ball_ = {FloatVec(dim_), -1.0};
      return;
    }
    if (auto b = circumball(support_)) {
      ball_ = *b;
      return;
    }
    // Numerically dependent support: minimal ball of the support set among
    // its affinely independent subsets.
    ball_ = {FloatVec(dim_), std::numeric_limits<double>::infinity()};
    const std::size_t m = support_.size();
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      std::vector<FloatVec> sub;
      for (std::size_t i = 0; i < m; ++i)
        if (mask & (1u << i)) sub.push_back(support_[i]);
      auto b = circumball(sub);
      if (!b || b->radius >= ball_.radius) continue;
      bool all = true;
      for (const auto& p : support_) all = all && ball_contains(*b, p);
      if (all) ball_ = *b;
    }
  }

  void move_to_front(std::list<std::size_t>::iterator end) {
    set_support_ball();
    if (support_.size() == dim_ + 1) return;
    for (auto it = order_.begin(); it != end;) {
      auto cur = it++;
      if (ball_contains(ball_, pts_[*cur])) continue;
      support_.push_back(pts_[*cur]);
      move_to_front(cur);
      support_.pop_back();
      order_.splice(order_.begin(), order_, cur);
    }
  }

  std::vector<FloatVec> pts_;
  std::size_t dim_;
  std::list<std::size_t> order_;
  std::vector<FloatVec> support_;
  EnclosingBall ball_;
};

} // namespace detail

/// Minimal enclosing ball. Input order is shuffled with `seed` first (expected
/// linear time); the result does not depend on the seed beyond rounding.
inline EnclosingBall solve_meb(const PointSet& s, std::uint64_t seed = 0) {
  s.validate();
  std::vector<FloatVec> pts = s.points;
  std::mt19937_64 rng(seed);
  std::shuffle(pts.begin(), pts.end(), rng);
  return detail::WelzlSolver(std::move(pts)).solve();
}

namespace detail {

// Circumcenter by Gaussian elimination with partial pivoting on the normal
// equations; kept separate from the Welzl path so the oracle stays independent.
inline bool oracle_circumball(const std::vector<const FloatVec*>& sub, EnclosingBall& out) {
  const FloatVec& p0 = *sub[0];
  const std::size_t n = p0.dim(), k = sub.size() - 1;
  out.center = p0;
  out.radius = 0;
  if (k == 0) return true;
  std::vector<std::vector<double>> diff(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) diff[j][i] = (*sub[j + 1])[i] - p0[i];
  std::vector<std::vector<double>> m(k, std::vector<double>(k + 1));
  double scale = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t i = 0; i < n; ++i) m[a][b] += diff[a][i] * diff[b][i];
    m[a][k] = m[a][a] / 2;
    scale = std::max(scale, m[a][a]);
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) <= 1e-12 * scale) return false;
    std::swap(m[piv], m[col]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= k; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    const double alpha = m[j][k] / m[j][j];
    for (std::size_t i = 0; i < n; ++i) out.center[i] += alpha * diff[j][i];
  }
  for (const auto* p : sub) out.radius = std::max(out.radius, distance(*p, out.center));
  return true;
}

} // namespace detail

constexpr std::size_t kBruteForceMebLimit = 12;

/// Exhaustive oracle: smallest circumball over all affinely independent
/// subsets of size <= d+1 that encloses every point.
inline EnclosingBall brute_force_meb(const PointSet& s) {
  s.validate();
  if (s.points.size() > kBruteForceMebLimit)
    throw InputError("brute_force_meb accepts at most " + std::to_string(kBruteForceMebLimit) + " points");
  const std::size_t m = s.points.size(), d = s.dim();
  EnclosingBall best{FloatVec(d), std::numeric_limits<double>::infinity()};
  std::vector<const FloatVec*> sub;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > d + 1) continue;
    sub.clear();
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) sub.push_back(&s.points[i]);
    EnclosingBall b;
    if (!detail::oracle_circumball(sub, b) || b.radius >= best.radius) continue;
    bool encloses = true;
    for (const auto& p : s.points) encloses = encloses && distance(p, b.center) <= b.radius + 1e-10 * (1 + b.radius);
    if (encloses) best = b;
  }
  return best;
}

/// Optimality certificate for the min-max problem: the center lies in the
/// convex hull of the contact points (those within contact_tol of the
/// boundary). Coordinates are rounded to the dyadic grid 2^-40 and the test
/// is exact, against the contacts widened by +-slack along each axis.
inline bool hull_certificate(const PointSet& s, const EnclosingBall& ball, double contact_tol = 1e-7,
                             double slack = 1e-9) {
  const auto round_rat = [](double v) {
    return rat_from_double(std::nearbyint(std::ldexp(v, 40))) / Rat(BigInt(1) << 40);
  };
  const std::size_t d = ball.center.dim();
  const Rat widen = rat_from_double(slack * std::max(1.0, ball.radius));
  std::vector<RatVec> gens;
  for (const auto& a : s.points) {
    if (distance(a, ball.center) < ball.radius - contact_tol) continue;
    RatVec base;
    for (std::size_t i = 0; i < d; ++i) base.coords.push_back(round_rat(a[i]));
    for (std::size_t i = 0; i < d; ++i)
      for (int sgn : {-1, 1}) {
        RatVec g = base;
        g[i] += sgn * widen;
        gens.push_back(std::move(g));
      }
  }
  if (gens.empty()) return false;
  RatVec c;
  for (std::size_t i = 0; i < d; ++i) c.coords.push_back(round_rat(ball.center[i]));
  return is_in_convex_hull(c, gens);
}

} // namespace vadu
