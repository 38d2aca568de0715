#pragma once

// Exact convex-hull primitives over Q^n plus a floating-point separating-axis
// overlap test for convex polygons.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vadu/errors.hpp"
#include "vadu/float_vec.hpp"
#include "vadu/rational.hpp"

namespace vadu {

namespace detail {

inline void require_uniform_dim(const std::vector<RatVec>& pts, std::size_t dim, const char* what) {
  for (const auto& p : pts)
    if (p.dim() != dim)
      throw InputError(std::string(what) + ": expected dimension " + std::to_string(dim) + ", got " +
                       std::to_string(p.dim()));
}

inline std::vector<RatVec> sorted_unique(std::vector<RatVec> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Sign of (a - o) x (b - o).
inline int orientation(const RatVec& o, const RatVec& a, const RatVec& b) {
  const Rat c = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

} // namespace detail

/// Extreme points of a planar point set in counterclockwise order, starting
/// at the lexicographically smallest point. Collinear boundary points are
/// dropped. Monotone chain, exact.
inline std::vector<RatVec> convex_hull_2d(std::vector<RatVec> points) {
  if (points.empty()) throw InputError("convex_hull_2d: empty point list");
  detail::require_uniform_dim(points, 2, "convex_hull_2d");
  points = detail::sorted_unique(std::move(points));
  if (points.size() < 3) return points;

  std::vector<RatVec> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && detail::orientation(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && detail::orientation(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// True iff p is a convex combination of the generators. Decided exactly by
/// phase-one simplex (Bland's rule) on
///   sum_j l_j g_j = p,  sum_j l_j = 1,  l >= 0.
inline bool is_in_convex_hull(const RatVec& p, const std::vector<RatVec>& generators) {
  if (generators.empty()) throw InputError("is_in_convex_hull: empty generator list");
  const std::size_t n = p.dim();
  detail::require_uniform_dim(generators, n, "is_in_convex_hull");

  for (const auto& g : generators)
    if (g == p) return true;
  for (std::size_t i = 0; i < n; ++i) {
    bool below = false, above = false;
    for (const auto& g : generators) {
      below = below || g[i] <= p[i];
      above = above || g[i] >= p[i];
    }
    if (!below || !above) return false;
  }

  const std::size_t k = generators.size();
  const std::size_t m = n + 1;
  const std::size_t cols = k + m; // structural + artificial; rhs stored separately
  std::vector<std::vector<Rat>> t(m + 1, std::vector<Rat>(cols + 1, Rat(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) t[i][j] = i < n ? generators[j][i] : Rat(1);
    t[i][cols] = i < n ? p[i] : Rat(1);
    if (t[i][cols] < 0)
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] = -t[i][j];
    t[i][k + i] = 1;
  }
  // Objective row: reduced costs of "minimize sum of artificials".
  auto& obj = t[m];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) obj[j] -= t[i][j];
  for (std::size_t i = 0; i < m; ++i) obj[cols] -= t[i][cols];

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = k + i;

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (obj[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;

    std::size_t leave = m;
    Rat best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rat ratio = t[i][cols] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = std::move(ratio);
      }
    }
    // Phase one is bounded below by zero, so an entering column always has a
    // positive entry.
    if (leave == m) break;

    const Rat piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rat f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j)
        if (t[leave][j] != 0) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return obj[cols] == 0;
}

/// Vertices of conv(points): deduplicated, sorted lexicographically.
inline std::vector<RatVec> extreme_points(std::vector<RatVec> points) {
  if (points.empty()) throw InputError("extreme_points: empty point list");
  const std::size_t n = points.front().dim();
  if (n == 0) throw InputError("extreme_points: zero-dimensional points");
  detail::require_uniform_dim(points, n, "extreme_points");
  points = detail::sorted_unique(std::move(points));
  if (points.size() <= 2) return points;

  if (n == 1) return {points.front(), points.back()};
  if (n == 2) {
    auto hull = convex_hull_2d(std::move(points));
    std::sort(hull.begin(), hull.end());
    return hull;
  }

  std::vector<RatVec> result;
  std::vector<RatVec> others;
  for (std::size_t i = 0; i < points.size(); ++i) {
    // Lexicographic extremes are always vertices.
    if (i == 0 || i + 1 == points.size()) {
      result.push_back(points[i]);
      continue;
    }
    others.clear();
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != i) others.push_back(points[j]);
    if (!is_in_convex_hull(points[i], others)) result.push_back(points[i]);
  }
  return result;
}

using Polygon2 = std::vector<FloatVec>;

inline double signed_area(const Polygon2& poly) {
  double a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return a / 2;
}

namespace detail {

inline void require_polygon(const Polygon2& poly, const Tolerance& tol) {
  if (poly.size() < 3) throw InputError("polygon needs at least 3 vertices");
  double diam2 = 0;
  for (const auto& p : poly) {
    if (p.dim() != 2) throw InputError("polygon vertex is not 2-dimensional");
    for (const auto& q : poly) diam2 = std::max(diam2, (p - q).squared_norm());
  }
  if (std::abs(signed_area(poly)) <= tol.eps * diam2) throw InputError("degenerate (zero-area) polygon");
}

inline void project_onto_axis(const Polygon2& poly, double ax, double ay, double& lo, double& hi) {
  lo = hi = poly.front()[0] * ax + poly.front()[1] * ay;
  for (const auto& p : poly) {
    const double s = p[0] * ax + p[1] * ay;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
}

// False when some edge normal of `edges_of` separates the two polygons with
// penetration depth <= eps.
inline bool all_axes_penetrate(const Polygon2& edges_of, const Polygon2& a, const Polygon2& b, double eps) {
  for (std::size_t i = 0; i < edges_of.size(); ++i) {
    const auto& p = edges_of[i];
    const auto& q = edges_of[(i + 1) % edges_of.size()];
    double nx = -(q[1] - p[1]);
    double ny = q[0] - p[0];
    const double len = std::hypot(nx, ny);
    if (len == 0) continue;
    nx /= len;
    ny /= len;
    double alo, ahi, blo, bhi;
    project_onto_axis(a, nx, ny, alo, ahi);
    project_onto_axis(b, nx, ny, blo, bhi);
    if (std::min(ahi, bhi) - std::max(alo, blo) <= eps) return false;
  }
  return true;
}

} // namespace detail

/// True iff the interiors of two convex polygons overlap with penetration
/// depth greater than tol.eps along every edge normal of either polygon.
/// Polygons touching along an edge or at a vertex do not overlap.
inline bool convex_polygons_interior_overlap(const Polygon2& p, const Polygon2& q, const Tolerance& tol = {}) {
  detail::require_polygon(p, tol);
  detail::require_polygon(q, tol);
  return detail::all_axes_penetrate(p, p, q, tol.eps) && detail::all_axes_penetrate(q, p, q, tol.eps);
}

} // namespace vadu
