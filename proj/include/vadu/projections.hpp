#pragma once

// Nearest-point projections and reflectors for the constraint sets used by
// the Douglas-Rachford dynamics. Nonconvex sets (sphere, ellipse, p-sphere)
// may have several nearest points; a deterministic one is returned and the
// result is flagged with unique = false.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vadu/errors.hpp"
#include "vadu/float_vec.hpp"

namespace vadu {

struct AffineLine {
  FloatVec point;
  FloatVec direction;
};
/// { x : <normal, x> = offset }
struct Hyperplane {
  FloatVec normal;
  double offset = 0;
};
/// { x : <normal, x> <= offset }
struct HalfSpace {
  FloatVec normal;
  double offset = 0;
};
struct Sphere {
  FloatVec center;
  double radius = 1;
};
struct Ball {
  FloatVec center;
  double radius = 1;
};
/// Axis-aligned planar ellipse x^2/a^2 + y^2/b^2 = 1 with a >= b > 0.
struct Ellipse {
  double a = 1;
  double b = 1;
};
/// Planar unit level set |x|^p + |y|^p = 1, p >= 1.
struct PSphere {
  double p = 2;
};
struct VPolytope {
  std::vector<FloatVec> vertices;
};

using SetDescriptor = std::variant<AffineLine, Hyperplane, HalfSpace, Sphere, Ball, Ellipse, PSphere, VPolytope>;

struct ProjectionResult {
  FloatVec point;
  bool unique = true;
  std::optional<std::string> note;
};

inline const char* kind_name(const SetDescriptor& s) {
  static constexpr const char* names[] = {"line",   "hyperplane", "halfspace", "sphere",
                                          "ball",   "ellipse",    "psphere",   "vpolytope"};
  return names[s.index()];
}

inline std::size_t set_dimension(const SetDescriptor& s) {
  struct {
    std::size_t operator()(const AffineLine& l) const { return l.point.dim(); }
    std::size_t operator()(const Hyperplane& h) const { return h.normal.dim(); }
    std::size_t operator()(const HalfSpace& h) const { return h.normal.dim(); }
    std::size_t operator()(const Sphere& s) const { return s.center.dim(); }
    std::size_t operator()(const Ball& b) const { return b.center.dim(); }
    std::size_t operator()(const Ellipse&) const { return 2; }
    std::size_t operator()(const PSphere&) const { return 2; }
    std::size_t operator()(const VPolytope& v) const { return v.vertices.front().dim(); }
  } visitor;
  return std::visit(visitor, s);
}

/// Throws InputError if the descriptor violates its parameter constraints.
inline void validate(const SetDescriptor& s) {
  const auto nonzero = [](const FloatVec& v, const char* what) {
    if (v.dim() == 0) throw InputError(std::string(what) + " must have dimension >= 1");
    if (v.squared_norm() == 0) throw InputError(std::string(what) + " must be nonzero");
  };
  const auto positive = [](double r, const char* what) {
    if (!(r > 0) || !std::isfinite(r)) throw InputError(std::string(what) + " must be positive and finite");
  };
  struct {
    decltype(nonzero)& nz;
    decltype(positive)& pos;
    void operator()(const AffineLine& l) const {
      nz(l.direction, "line direction");
      if (l.point.dim() != l.direction.dim()) throw InputError("line point/direction dimension mismatch");
    }
    void operator()(const Hyperplane& h) const {
      nz(h.normal, "hyperplane normal");
      if (!std::isfinite(h.offset)) throw InputError("hyperplane offset must be finite");
    }
    void operator()(const HalfSpace& h) const {
      nz(h.normal, "halfspace normal");
      if (!std::isfinite(h.offset)) throw InputError("halfspace offset must be finite");
    }
    void operator()(const Sphere& s) const {
      if (s.center.dim() == 0) throw InputError("sphere center must have dimension >= 1");
      pos(s.radius, "sphere radius");
    }
    void operator()(const Ball& b) const {
      if (b.center.dim() == 0) throw InputError("ball center must have dimension >= 1");
      pos(b.radius, "ball radius");
    }
    void operator()(const Ellipse& e) const {
      pos(e.b, "ellipse semi-axis b");
      pos(e.a, "ellipse semi-axis a");
      if (e.a < e.b) throw InputError("ellipse requires a >= b");
    }
    void operator()(const PSphere& p) const {
      if (!(p.p >= 1) || !std::isfinite(p.p)) throw InputError("psphere exponent p must be >= 1");
    }
    void operator()(const VPolytope& v) const {
      if (v.vertices.empty()) throw InputError("vpolytope needs at least one vertex");
      for (const auto& x : v.vertices)
        if (x.dim() != v.vertices.front().dim() || x.dim() == 0)
          throw InputError("vpolytope vertices have inconsistent dimension");
    }
  } visitor{nonzero, positive};
  std::visit(visitor, s);
}

namespace detail {

constexpr double kSolverResidual = 1e-12;
constexpr int kSolverBudget = 400;

inline ProjectionResult project_sphere(const FloatVec& c, double r, const FloatVec& x) {
  FloatVec d = x - c;
  const double n = d.norm();
  if (n == 0) return {c + r * unit_vector(c.dim(), 0), false, "point at center; selected center + r*e1"};
  return {c + (r / n) * d, true, std::nullopt};
}

// Nearest point on x^2/a^2 + y^2/b^2 = 1 for u, v >= 0 (first quadrant).
// Returns false in `unique` when the mirror image across an axis is an equally
// near point.
inline FloatVec project_ellipse_quadrant(double a, double b, double u, double v, bool& unique) {
  unique = true;
  const double a2 = a * a, b2 = b * b;
  if (v == 0) {
    const double evolute = (a2 - b2) / a;
    if (u < evolute) {
      const double px = a2 * u / (a2 - b2);
      const double ratio = px / a;
      unique = false;
      return FloatVec{px, b * std::sqrt(std::max(0.0, 1 - ratio * ratio))};
    }
    return FloatVec{a, 0.0};
  }
  if (u == 0) return FloatVec{0.0, b};

  const double au = a * u, bv = b * v;
  const auto f = [&](double t) {
    const double p = au / (t + a2), q = bv / (t + b2);
    return p * p + q * q - 1;
  };
  const auto df = [&](double t) {
    const double ta = t + a2, tb = t + b2;
    return -2 * (au * au / (ta * ta * ta) + bv * bv / (tb * tb * tb));
  };
  double lo = -b2 + bv;
  double hi = -b2 + std::sqrt(au * au + bv * bv);
  double t = lo;
  double ft = f(t);
  int iter = 0;
  for (; iter < kSolverBudget && std::abs(ft) >= kSolverResidual; ++iter) {
    if (ft > 0)
      lo = t;
    else
      hi = t;
    double next = t - ft / df(t);
    if (!(next > lo && next < hi)) next = lo + (hi - lo) / 2;
    if (next == t || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), 1.0)) break;
    t = next;
    ft = f(t);
  }
  const double px = a2 * u / (t + a2);
  double py = b2 * v / (t + b2);
  if (std::abs(ft) >= kSolverResidual) {
    // Bracket collapsed while y = b^2 v/(t+b^2) is ill-conditioned in t
    // (v tiny); x is well conditioned there, so recover y from the curve.
    const double ratio = px / a;
    py = b * std::sqrt(std::max(0.0, 1 - ratio * ratio));
    const double res = std::abs(px * px / a2 + py * py / b2 - 1);
    if (res >= kSolverResidual || iter >= kSolverBudget)
      throw NumericalError("ellipse projection did not reach residual target");
  }
  return FloatVec{px, py};
}

inline ProjectionResult project_ellipse(const Ellipse& e, const FloatVec& x) {
  if (e.a == e.b) return project_sphere(FloatVec{0.0, 0.0}, e.a, x);
  bool unique = true;
  FloatVec q = project_ellipse_quadrant(e.a, e.b, std::abs(x[0]), std::abs(x[1]), unique);
  if (x[0] < 0) q[0] = -q[0];
  if (x[1] < 0) q[1] = -q[1];
  if (!unique) return {q, false, "two symmetric nearest points; selected nonnegative last coordinate"};
  return {q, true, std::nullopt};
}

inline double p_norm2(double c, double s, double p) {
  return std::pow(std::pow(c, p) + std::pow(s, p), 1 / p);
}

// Point of the first-quadrant arc of |x|^p + |y|^p = 1 at polar angle theta.
inline void p_arc_point(double theta, double p, double& x, double& y) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double n = p_norm2(c, s, p);
  x = c / n;
  y = s / n;
}

inline double p_arc_dist2(double theta, double p, double u, double v) {
  double x, y;
  p_arc_point(theta, p, x, y);
  return (x - u) * (x - u) + (y - v) * (y - v);
}

// Derivative of squared distance w.r.t. theta, halved: <c(theta) - x, c'(theta)>.
inline double p_arc_stationarity(double theta, double p, double u, double v) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double np = std::pow(c, p) + std::pow(s, p);
  const double n = std::pow(np, 1 / p);
  const double dn = std::pow(np, 1 / p - 1) * (std::pow(s, p - 1) * c - std::pow(c, p - 1) * s);
  const double dx = (-s * n - c * dn) / (n * n);
  const double dy = (c * n - s * dn) / (n * n);
  return (c / n - u) * dx + (s / n - v) * dy;
}

inline ProjectionResult project_psphere_p1(const FloatVec& x) {
  // |x| + |y| = 1: four segments between the axis points.
  const double u = std::abs(x[0]), v = std::abs(x[1]);
  // Closest point on segment (1,0)-(0,1).
  double t = std::clamp((u - v + 1) / 2, 0.0, 1.0);
  FloatVec q{t, 1 - t};
  bool unique = !(x[0] == 0 && q[0] > 0) && !(x[1] == 0 && q[1] > 0);
  if (x[0] < 0) q[0] = -q[0];
  if (x[1] < 0) q[1] = -q[1];
  if (!unique) return {q, false, "mirror-symmetric nearest points; selected nonnegative coordinates"};
  return {q, true, std::nullopt};
}

inline ProjectionResult project_psphere(const PSphere& ps, const FloatVec& x) {
  const double p = ps.p;
  if (p == 1) return project_psphere_p1(x);
  if (p == 2) return project_sphere(FloatVec{0.0, 0.0}, 1.0, x);
  const double u = std::abs(x[0]), v = std::abs(x[1]);
  constexpr double quarter = std::numbers::pi / 2;

  if (u == 0 && v == 0 && p > 2) return {FloatVec{1.0, 0.0}, false, "point at origin; selected e1"};

  constexpr int grid = 1024;
  int best = 0;
  double best_d = p_arc_dist2(0, p, u, v);
  for (int i = 1; i <= grid; ++i) {
    const double d = p_arc_dist2(quarter * i / grid, p, u, v);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  double lo = quarter * std::max(0, best - 1) / grid;
  double hi = quarter * std::min(grid, best + 1) / grid;

  // Golden-section refinement of the bracketing cell.
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = p_arc_dist2(x1, p, u, v), f2 = p_arc_dist2(x2, p, u, v);
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = p_arc_dist2(x1, p, u, v);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = p_arc_dist2(x2, p, u, v);
    }
  }
  double theta = (lo + hi) / 2;
  if (p_arc_dist2(0, p, u, v) <= p_arc_dist2(theta, p, u, v)) theta = 0;
  if (p_arc_dist2(quarter, p, u, v) < p_arc_dist2(theta, p, u, v)) theta = quarter;

  // Newton polish on the stationarity condition, safeguarded by a sign bracket.
  const double scale = 1 + std::hypot(u, v);
  if (theta > 0 && theta < quarter) {
    double blo = std::max(0.0, theta - 1e-6), bhi = std::min(quarter, theta + 1e-6);
    double glo = p_arc_stationarity(blo, p, u, v), ghi = p_arc_stationarity(bhi, p, u, v);
    if (glo < 0 && ghi > 0) {
      double g = p_arc_stationarity(theta, p, u, v);
      for (int it = 0; it < kSolverBudget && std::abs(g) >= kSolverResidual * scale; ++it) {
        if (g < 0)
          blo = theta;
        else
          bhi = theta;
        const double h = 1e-7 * (bhi - blo + 1e-9);
        const double dg = (p_arc_stationarity(theta + h, p, u, v) - p_arc_stationarity(theta - h, p, u, v)) / (2 * h);
        double next = dg > 0 ? theta - g / dg : blo + (bhi - blo) / 2;
        if (!(next > blo && next < bhi)) next = blo + (bhi - blo) / 2;
        if (next == theta) break;
        theta = next;
        g = p_arc_stationarity(theta, p, u, v);
      }
      if (std::abs(g) >= kSolverResidual * scale && bhi - blo > 1e-14)
        throw NumericalError("p-sphere projection did not reach residual target");
    }
  }

  double qx, qy;
  p_arc_point(theta, p, qx, qy);
  if (theta == 0) qy = 0;
  if (theta == quarter) qx = 0;
  FloatVec q{qx, qy};
  const bool unique = !(x[0] == 0 && qx > 0) && !(x[1] == 0 && qy > 0);
  if (x[0] < 0) q[0] = -q[0];
  if (x[1] < 0) q[1] = -q[1];
  if (!unique) return {q, false, "mirror-symmetric nearest points; selected nonnegative coordinates"};
  return {q, true, std::nullopt};
}

// Nearest point of conv(vertices): every affinely independent vertex subset
// of size <= d+1 is enumerated in lexicographic order; x is projected onto
// the subset's affine hull and kept when its barycentric coordinates are
// nonnegative. The nearest point of the polytope lies in the relative
// interior of such a simplex, whose affine hull it is the projection onto.
inline ProjectionResult project_vpolytope(const VPolytope& poly, const FloatVec& x, const Tolerance& tol) {
  const auto& verts = poly.vertices;
  const std::size_t n = x.dim();
  const std::size_t m = verts.size();
  const std::size_t max_k = std::min(m, n + 1);

  std::optional<FloatVec> best;
  double best_d2 = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx;

  Eigen::VectorXd target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = x[i];

  const auto consider = [&](const std::vector<std::size_t>& s) {
    const Eigen::Index k = static_cast<Eigen::Index>(s.size()) - 1;
    Eigen::VectorXd base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = verts[s[0]][i];
    FloatVec cand(n);
    if (k == 0) {
      cand = verts[s[0]];
    } else {
      Eigen::MatrixXd diff(n, k);
      for (Eigen::Index j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) diff(i, j) = verts[s[j + 1]][i] - base[i];
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(diff);
      qr.setThreshold(1e-12);
      if (qr.rank() < k) return;
      const Eigen::VectorXd coef = qr.solve(target - base);
      double first = 1;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (coef[j] < -tol.eps) return;
        first -= coef[j];
      }
      if (first < -tol.eps) return;
      const Eigen::VectorXd pt = base + diff * coef;
      for (std::size_t i = 0; i < n; ++i) cand[i] = pt[i];
    }
    const double d2 = (cand - x).squared_norm();
    if (!best || d2 < best_d2 - 1e-15 * (1 + best_d2)) {
      best_d2 = d2;
      best = cand;
    }
  };

  // Enumerate subsets in lexicographic order of index lists.
  const auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (!idx.empty()) consider(idx);
    if (idx.size() == max_k) return;
    for (std::size_t i = start; i < m; ++i) {
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  recurse(recurse, 0);
  return {*best, true, std::nullopt};
}

} // namespace detail

/// A nearest point of S to x.
inline ProjectionResult project(const SetDescriptor& s, const FloatVec& x, const Tolerance& tol = {}) {
  if (!x.all_finite()) throw InputError("project: non-finite input point");
  if (set_dimension(s) != x.dim())
    throw InputError(std::string("project: point dimension ") + std::to_string(x.dim()) + " does not match " +
                     kind_name(s) + " dimension " + std::to_string(set_dimension(s)));
  struct {
    const FloatVec& x;
    const Tolerance& tol;
    ProjectionResult operator()(const AffineLine& l) const {
      const double t = dot(x - l.point, l.direction) / l.direction.squared_norm();
      return {l.point + t * l.direction, true, std::nullopt};
    }
    ProjectionResult operator()(const Hyperplane& h) const {
      const double t = (dot(h.normal, x) - h.offset) / h.normal.squared_norm();
      return {x - t * h.normal, true, std::nullopt};
    }
    ProjectionResult operator()(const HalfSpace& h) const {
      const double t = (dot(h.normal, x) - h.offset) / h.normal.squared_norm();
      if (t <= 0) return {x, true, std::nullopt};
      return {x - t * h.normal, true, std::nullopt};
    }
    ProjectionResult operator()(const Sphere& s) const { return detail::project_sphere(s.center, s.radius, x); }
    ProjectionResult operator()(const Ball& b) const {
      const FloatVec d = x - b.center;
      const double n = d.norm();
      if (n <= b.radius) return {x, true, std::nullopt};
      return {b.center + (b.radius / n) * d, true, std::nullopt};
    }
    ProjectionResult operator()(const Ellipse& e) const { return detail::project_ellipse(e, x); }
    ProjectionResult operator()(const PSphere& p) const { return detail::project_psphere(p, x); }
    ProjectionResult operator()(const VPolytope& v) const { return detail::project_vpolytope(v, x, tol); }
  } visitor{x, tol};
  return std::visit(visitor, s);
}

/// 2 P_S(x) - x.
inline FloatVec reflect(const SetDescriptor& s, const FloatVec& x, const Tolerance& tol = {}) {
  return 2.0 * project(s, x, tol).point - x;
}

namespace detail {

struct ResidualVisitor {
  const FloatVec& x;
  const SetDescriptor& s;
  double operator()(const Sphere& sp) const { return std::abs(distance(x, sp.center) - sp.radius); }
  double operator()(const Ellipse& e) const {
    return std::abs(x[0] * x[0] / (e.a * e.a) + x[1] * x[1] / (e.b * e.b) - 1);
  }
  double operator()(const PSphere& p) const {
    return std::abs(std::pow(std::abs(x[0]), p.p) + std::pow(std::abs(x[1]), p.p) - 1);
  }
  template <class T>
  double operator()(const T&) const { return distance(x, project(s, x).point); }
};

} // namespace detail

/// Zero iff x lies in S: the distance for convex sets, the absolute value of
/// the defining equation for sphere, ellipse and p-sphere.
inline double membership_residual(const SetDescriptor& s, const FloatVec& x) {
  const detail::ResidualVisitor visitor{x, s};
  if (set_dimension(s) != x.dim()) throw InputError("membership_residual: dimension mismatch");
  return std::visit(visitor, s);
}

} // namespace vadu
