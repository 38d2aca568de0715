#pragma once

// Edge unfoldings of convex 3-polytopes. A cut tree is a spanning tree of
// the dual graph (faces as nodes, shared edges as arcs); its edges are the
// folds, every other polytope edge is cut. Developing the faces along the
// folds gives a planar net, which is then checked for face overlaps.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vadu/errors.hpp"
#include "vadu/float_vec.hpp"
#include "vadu/hull.hpp"
#include "vadu/linkage.hpp"
#include "vadu/parallel.hpp"

namespace vadu {

using Edge = std::pair<std::size_t, std::size_t>; // (min, max) vertex indices

inline Edge make_edge(std::size_t a, std::size_t b) { return {std::min(a, b), std::max(a, b)}; }

namespace detail {

inline FloatVec cross3(const FloatVec& a, const FloatVec& b) {
  return FloatVec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

} // namespace detail

/// Convex 3-polytope with explicit faces. Each face lists vertex indices
/// counterclockwise as seen from outside.
struct Polytope3 {
  std::vector<FloatVec> vertices;
  std::vector<std::vector<std::size_t>> faces;

  const FloatVec& vertex(std::size_t i) const { return vertices[i]; }

  /// Newell normal of face f, unit length.
  FloatVec face_normal(std::size_t f) const {
    FloatVec n(3);
    const auto& fc = faces[f];
    for (std::size_t i = 0; i < fc.size(); ++i) {
      const FloatVec& p = vertices[fc[i]];
      const FloatVec& q = vertices[fc[(i + 1) % fc.size()]];
      n[0] += (p[1] - q[1]) * (p[2] + q[2]);
      n[1] += (p[2] - q[2]) * (p[0] + q[0]);
      n[2] += (p[0] - q[0]) * (p[1] + q[1]);
    }
    return (1.0 / n.norm()) * n;
  }

  double face_area(std::size_t f) const {
    FloatVec acc(3);
    const auto& fc = faces[f];
    for (std::size_t i = 1; i + 1 < fc.size(); ++i)
      acc += detail::cross3(vertices[fc[i]] - vertices[fc[0]], vertices[fc[i + 1]] - vertices[fc[0]]);
    return acc.norm() / 2;
  }

  double surface_area() const {
    double a = 0;
    for (std::size_t f = 0; f < faces.size(); ++f) a += face_area(f);
    return a;
  }

  std::vector<Edge> edges() const {
    std::set<Edge> s;
    for (const auto& fc : faces)
      for (std::size_t i = 0; i < fc.size(); ++i) s.insert(make_edge(fc[i], fc[(i + 1) % fc.size()]));
    return {s.begin(), s.end()};
  }

  /// Throws InputError unless the polytope is a closed, consistently
  /// outward-oriented surface of planar convex faces with V - E + F = 2.
  void validate(double planar_tol = 1e-7) const {
    if (vertices.size() < 4 || faces.size() < 4) throw InputError("polytope needs >= 4 vertices and faces");
    for (const auto& v : vertices)
      if (v.dim() != 3) throw InputError("polytope vertices must be 3-dimensional");
    std::map<std::pair<std::size_t, std::size_t>, int> directed;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const auto& fc = faces[f];
      if (fc.size() < 3) throw InputError("face " + std::to_string(f) + " has fewer than 3 vertices");
      for (std::size_t i = 0; i < fc.size(); ++i) {
        if (fc[i] >= vertices.size()) throw InputError("face " + std::to_string(f) + " has an index out of range");
        const std::size_t a = fc[i], b = fc[(i + 1) % fc.size()];
        if (a == b) throw InputError("face " + std::to_string(f) + " repeats a vertex");
        if (++directed[{a, b}] > 1) throw InputError("edge used twice in the same direction (non-manifold or "
                                                     "inconsistent orientation)");
      }
    }
    for (const auto& [e, count] : directed)
      if (!directed.count({e.second, e.first}))
        throw InputError("edge [" + std::to_string(e.first) + "," + std::to_string(e.second) +
                         "] does not belong to exactly two faces");

    FloatVec centroid(3);
    for (const auto& v : vertices) centroid += v;
    centroid *= 1.0 / static_cast<double>(vertices.size());

    for (std::size_t f = 0; f < faces.size(); ++f) {
      const auto& fc = faces[f];
      const FloatVec n = face_normal(f);
      const FloatVec& p0 = vertices[fc[0]];
      FloatVec fcen(3);
      for (std::size_t i : fc) {
        if (std::abs(dot(vertices[i] - p0, n)) > planar_tol)
          throw InputError("face " + std::to_string(f) + " is not planar");
        fcen += vertices[i];
      }
      fcen *= 1.0 / static_cast<double>(fc.size());
      if (dot(fcen - centroid, n) <= 0) throw InputError("face " + std::to_string(f) + " is not oriented outward");
      for (std::size_t i = 0; i < fc.size(); ++i) {
        const FloatVec& a = vertices[fc[i]];
        const FloatVec& b = vertices[fc[(i + 1) % fc.size()]];
        const FloatVec& c = vertices[fc[(i + 2) % fc.size()]];
        if (dot(detail::cross3(b - a, c - b), n) <= 1e-12 * (b - a).norm() * (c - b).norm())
          throw InputError("face " + std::to_string(f) + " is not strictly convex");
      }
    }
    const long long v = static_cast<long long>(vertices.size());
    const long long e = static_cast<long long>(directed.size() / 2);
    const long long fcount = static_cast<long long>(faces.size());
    if (v - e + fcount != 2) throw InputError("Euler relation V - E + F = 2 fails");
  }
};

/// Convex hull of a point set in general position up to coplanar facets, with
/// facets found by brute force over vertex triples. Desk scale only.
inline Polytope3 polytope_from_points(const std::vector<FloatVec>& pts, double tol = 1e-9) {
  const std::size_t n = pts.size();
  if (n < 4) throw InputError("need at least 4 points");
  double scale = 0;
  for (const auto& p : pts) scale = std::max(scale, p.norm());
  const double eps = tol * std::max(1.0, scale);

  Polytope3 poly;
  poly.vertices = pts;
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        FloatVec nrm = detail::cross3(pts[j] - pts[i], pts[k] - pts[i]);
        const double len = nrm.norm();
        if (len <= eps) continue;
        nrm *= 1.0 / len;
        int pos = 0, neg = 0;
        std::vector<std::size_t> on;
        for (std::size_t m = 0; m < n; ++m) {
          const double s = dot(pts[m] - pts[i], nrm);
          if (s > eps)
            ++pos;
          else if (s < -eps)
            ++neg;
          else
            on.push_back(m);
        }
        if (pos > 0 && neg > 0) continue;
        if (pos > 0) nrm *= -1.0; // outward: all other points on the negative side
        if (!seen.insert(on).second) continue;

        FloatVec c(3);
        for (std::size_t m : on) c += pts[m];
        c *= 1.0 / static_cast<double>(on.size());
        const FloatVec e1 = (1.0 / (pts[on[0]] - c).norm()) * (pts[on[0]] - c);
        const FloatVec e2 = detail::cross3(nrm, e1);
        std::vector<std::pair<double, std::size_t>> ang;
        for (std::size_t m : on) ang.emplace_back(std::atan2(dot(pts[m] - c, e2), dot(pts[m] - c, e1)), m);
        std::sort(ang.begin(), ang.end());
        std::vector<std::size_t> face;
        for (auto& [a, m] : ang) face.push_back(m);
        // Drop collinear (non-vertex) boundary points.
        std::vector<std::size_t> strict;
        for (std::size_t q = 0; q < face.size(); ++q) {
          const FloatVec& a = pts[face[(q + face.size() - 1) % face.size()]];
          const FloatVec& b = pts[face[q]];
          const FloatVec& d = pts[face[(q + 1) % face.size()]];
          if (dot(detail::cross3(b - a, d - b), nrm) > eps * eps) strict.push_back(face[q]);
        }
        poly.faces.push_back(std::move(strict));
      }
  // Points on no face (interior or inside a face) are not vertices.
  std::vector<std::size_t> remap(n, n);
  for (const auto& f : poly.faces)
    for (std::size_t v : f) remap[v] = 0;
  std::vector<FloatVec> kept;
  for (std::size_t i = 0; i < n; ++i)
    if (remap[i] == 0) {
      remap[i] = kept.size();
      kept.push_back(pts[i]);
    }
  poly.vertices = std::move(kept);
  for (auto& f : poly.faces)
    for (auto& v : f) v = remap[v];
  // Lowest vertex index first for a canonical face order.
  for (auto& f : poly.faces) std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
  std::sort(poly.faces.begin(), poly.faces.end());
  poly.validate();
  return poly;
}

inline Polytope3 regular_tetrahedron() {
  return polytope_from_points({FloatVec{1, 1, 1}, FloatVec{1, -1, -1}, FloatVec{-1, 1, -1}, FloatVec{-1, -1, 1}});
}

inline Polytope3 cube() {
  std::vector<FloatVec> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(FloatVec{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  return polytope_from_points(pts);
}

inline Polytope3 regular_octahedron() {
  return polytope_from_points({FloatVec{1, 0, 0}, FloatVec{-1, 0, 0}, FloatVec{0, 1, 0}, FloatVec{0, -1, 0},
                               FloatVec{0, 0, 1}, FloatVec{0, 0, -1}});
}

/// Regular tetrahedron with every vertex cut off at fraction `depth` of each
/// incident edge. depth = 1/3 is the Archimedean solid (vertices are the
/// permutations of (3,1,1) with an even number of sign changes, scaled).
inline Polytope3 truncated_tetrahedron(double depth = 1.0 / 3) {
  if (!(depth > 0 && depth < 0.5)) throw InputError("truncation depth must lie in (0, 1/2)");
  const std::array<FloatVec, 4> t{FloatVec{1, 1, 1}, FloatVec{1, -1, -1}, FloatVec{-1, 1, -1}, FloatVec{-1, -1, 1}};
  std::vector<FloatVec> pts;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) pts.push_back(t[i] + depth * (t[j] - t[i]));
  return polytope_from_points(pts);
}

/// Tetrahedron over the unit-circumradius equilateral base in z = 0 with apex
/// (0, 0, height), every vertex truncated at `depth`. Same combinatorics as
/// the Archimedean solid (4 triangles, 4 hexagons); for height >= 4 some of
/// its edge unfoldings overlap.
inline Polytope3 tall_truncated_tetrahedron(double height = 4, double depth = 1.0 / 3) {
  if (!(height > 0)) throw InputError("height must be positive");
  if (!(depth > 0 && depth < 0.5)) throw InputError("truncation depth must lie in (0, 1/2)");
  const double s = std::sqrt(3.0) / 2;
  const std::array<FloatVec, 4> t{FloatVec{1, 0, 0}, FloatVec{-0.5, s, 0}, FloatVec{-0.5, -s, 0},
                                  FloatVec{0, 0, height}};
  std::vector<FloatVec> pts;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) pts.push_back(t[i] + depth * (t[j] - t[i]));
  return polytope_from_points(pts);
}

/// Built-in instance by name: tetrahedron, cube, octahedron,
/// truncated-tetrahedron, truncated-tetrahedron-tall.
inline Polytope3 builtin_polytope(const std::string& name) {
  if (name == "tetrahedron") return regular_tetrahedron();
  if (name == "cube") return cube();
  if (name == "octahedron") return regular_octahedron();
  if (name == "truncated-tetrahedron") return truncated_tetrahedron();
  if (name == "truncated-tetrahedron-tall") return tall_truncated_tetrahedron();
  throw InputError("unknown built-in polytope \"" + name + "\"");
}

/// A polytope edge with the two faces that share it.
struct DualEdge {
  std::size_t face_a = 0, face_b = 0; // face_a < face_b
  Edge edge;
};

/// Dual arcs sorted by (face_a, face_b).
inline std::vector<DualEdge> dual_edges(const Polytope3& p) {
  std::map<Edge, std::vector<std::size_t>> owners;
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    const auto& fc = p.faces[f];
    for (std::size_t i = 0; i < fc.size(); ++i) owners[make_edge(fc[i], fc[(i + 1) % fc.size()])].push_back(f);
  }
  std::vector<DualEdge> out;
  for (const auto& [e, fs] : owners) {
    if (fs.size() != 2)
      throw InputError("edge [" + std::to_string(e.first) + "," + std::to_string(e.second) + "] lies on " +
                       std::to_string(fs.size()) + " faces (non-manifold)");
    out.push_back({std::min(fs[0], fs[1]), std::max(fs[0], fs[1]), e});
  }
  std::sort(out.begin(), out.end(), [](const DualEdge& a, const DualEdge& b) {
    return std::tie(a.face_a, a.face_b) < std::tie(b.face_a, b.face_b);
  });
  return out;
}

inline Graph dual_graph(const Polytope3& p) {
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (const auto& d : dual_edges(p)) arcs.emplace_back(d.face_a, d.face_b);
  return Graph(p.faces.size(), arcs);
}

/// Fold edges (polytope edges) forming a spanning tree of the dual graph.
struct CutTree {
  std::vector<Edge> fold_edges; // sorted

  friend bool operator==(const CutTree&, const CutTree&) = default;
};

struct PlacedFace {
  std::size_t face = 0;
  Polygon2 polygon; // same vertex order as the 3-D face
};

struct Net {
  std::vector<PlacedFace> placed; // indexed by face
  CutTree tree;
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

// Dual arcs of the tree; throws unless the folds form a spanning tree.
inline std::vector<DualEdge> tree_arcs(const Polytope3& p, const CutTree& t) {
  const auto arcs = dual_edges(p);
  std::map<Edge, DualEdge> by_edge;
  for (const auto& d : arcs) by_edge[d.edge] = d;
  const std::size_t f = p.faces.size();
  if (t.fold_edges.size() != f - 1)
    throw InputError("cut tree has " + std::to_string(t.fold_edges.size()) + " fold edges, expected " +
                     std::to_string(f - 1));
  UnionFind uf(f);
  std::vector<DualEdge> out;
  for (const auto& e : t.fold_edges) {
    auto it = by_edge.find(make_edge(e.first, e.second));
    if (it == by_edge.end())
      throw InputError("fold edge [" + std::to_string(e.first) + "," + std::to_string(e.second) +
                       "] is not a polytope edge");
    if (!uf.unite(it->second.face_a, it->second.face_b)) throw InputError("fold edges contain a cycle");
    out.push_back(it->second);
  }
  return out;
}

// Face f in its own orthonormal frame: vertex 0 at the origin, edge 0 along
// +x, interior in the upper half-plane.
inline Polygon2 local_face_coords(const Polytope3& p, std::size_t f) {
  const auto& fc = p.faces[f];
  const FloatVec& p0 = p.vertex(fc[0]);
  const FloatVec n = p.face_normal(f);
  FloatVec e1 = p.vertex(fc[1]) - p0;
  e1 *= 1.0 / e1.norm();
  const FloatVec e2 = cross3(n, e1);
  Polygon2 out;
  for (std::size_t v : fc) {
    const FloatVec d = p.vertex(v) - p0;
    out.push_back(FloatVec{dot(d, e1), dot(d, e2)});
  }
  return out;
}

} // namespace detail

/// Develops P into the plane along the fold edges of t, starting from face 0
/// and visiting children in breadth-first, ascending face order. Each child
/// is placed by the orientation-preserving isometry that maps its copy of the
/// shared edge onto the parent's; consistent face orientation puts it on the
/// far side of that edge.
inline Net unfold(const Polytope3& p, const CutTree& t) {
  const auto arcs = detail::tree_arcs(p, t);
  const std::size_t f = p.faces.size();
  std::vector<std::vector<std::pair<std::size_t, Edge>>> adj(f);
  for (const auto& d : arcs) {
    adj[d.face_a].emplace_back(d.face_b, d.edge);
    adj[d.face_b].emplace_back(d.face_a, d.edge);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  Net net;
  net.tree.fold_edges = t.fold_edges;
  std::sort(net.tree.fold_edges.begin(), net.tree.fold_edges.end());
  net.placed.resize(f);
  std::vector<char> done(f, 0);
  net.placed[0] = {0, detail::local_face_coords(p, 0)};
  done[0] = 1;
  std::vector<std::size_t> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t parent = queue[head];
    const auto& pf = p.faces[parent];
    const Polygon2& ppoly = net.placed[parent].polygon;
    for (const auto& [child, edge] : adj[parent]) {
      if (done[child]) continue;
      const auto pos_in = [](const std::vector<std::size_t>& face, std::size_t v) {
        return static_cast<std::size_t>(std::find(face.begin(), face.end(), v) - face.begin());
      };
      const auto& cf = p.faces[child];
      Polygon2 local = detail::local_face_coords(p, child);
      const FloatVec& target_u = ppoly[pos_in(pf, edge.first)];
      const FloatVec& target_w = ppoly[pos_in(pf, edge.second)];
      const FloatVec& src_u = local[pos_in(cf, edge.first)];
      const FloatVec& src_w = local[pos_in(cf, edge.second)];
      const double rot = std::atan2(target_w[1] - target_u[1], target_w[0] - target_u[0]) -
                         std::atan2(src_w[1] - src_u[1], src_w[0] - src_u[0]);
      const double c = std::cos(rot), s = std::sin(rot);
      Polygon2 placed;
      for (const auto& q : local) {
        const double dx = q[0] - src_u[0], dy = q[1] - src_u[1];
        placed.push_back(FloatVec{target_u[0] + c * dx - s * dy, target_u[1] + s * dx + c * dy});
      }
      net.placed[child] = {child, std::move(placed)};
      done[child] = 1;
      queue.push_back(child);
    }
  }
  return net;
}

struct OverlapReport {
  bool overlapping = false;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Every face pair (tree-adjacent ones included) is tested for interior
/// overlap; pairs touching within tol.eps are not reported.
inline OverlapReport check_overlap(const Net& net, const Tolerance& tol = {}) {
  OverlapReport rep;
  for (std::size_t i = 0; i < net.placed.size(); ++i)
    for (std::size_t j = i + 1; j < net.placed.size(); ++j)
      if (convex_polygons_interior_overlap(net.placed[i].polygon, net.placed[j].polygon, tol))
        rep.pairs.emplace_back(net.placed[i].face, net.placed[j].face);
  rep.overlapping = !rep.pairs.empty();
  return rep;
}

/// Visits spanning trees of the dual graph by include/exclude recursion over
/// the sorted dual arcs (include first), stopping after `budget` trees or
/// when visit returns false. Returns the number of trees visited.
template <class Visit>
std::size_t enumerate_spanning_trees(const Polytope3& p, std::size_t budget, Visit&& visit) {
  const auto arcs = dual_edges(p);
  const std::size_t f = p.faces.size();
  std::vector<char> chosen(arcs.size(), 0);
  std::size_t visited = 0;
  bool stop = false;

  const auto still_connectable = [&](std::size_t from) {
    detail::UnionFind uf(f);
    std::size_t comps = f;
    for (std::size_t e = 0; e < arcs.size(); ++e)
      if ((e < from && chosen[e]) || e >= from) comps -= uf.unite(arcs[e].face_a, arcs[e].face_b);
    return comps == 1;
  };

  const auto rec = [&](auto&& self, std::size_t e, std::size_t picked, detail::UnionFind uf) -> void {
    if (stop) return;
    if (picked == f - 1) {
      CutTree t;
      for (std::size_t i = 0; i < arcs.size(); ++i)
        if (chosen[i]) t.fold_edges.push_back(arcs[i].edge);
      std::sort(t.fold_edges.begin(), t.fold_edges.end());
      ++visited;
      if (!visit(t) || visited >= budget) stop = true;
      return;
    }
    if (e == arcs.size()) return;
    if (uf.find(arcs[e].face_a) != uf.find(arcs[e].face_b)) {
      detail::UnionFind next = uf;
      next.unite(arcs[e].face_a, arcs[e].face_b);
      chosen[e] = 1;
      self(self, e + 1, picked + 1, std::move(next));
      chosen[e] = 0;
    }
    if (!stop && still_connectable(e + 1)) self(self, e + 1, picked, std::move(uf));
  };
  if (budget > 0) rec(rec, 0, 0, detail::UnionFind(f));
  return visited;
}

/// Number of spanning trees of the dual graph (matrix-tree theorem).
inline double spanning_tree_count(const Polytope3& p) {
  const std::size_t f = p.faces.size();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(f));
  for (const auto& d : dual_edges(p)) {
    const auto a = static_cast<Eigen::Index>(d.face_a), b = static_cast<Eigen::Index>(d.face_b);
    lap(a, a) += 1;
    lap(b, b) += 1;
    lap(a, b) -= 1;
    lap(b, a) -= 1;
  }
  const auto m = static_cast<Eigen::Index>(f - 1);
  return std::round(lap.bottomRightCorner(m, m).determinant());
}

/// Uniform random spanning tree of the dual graph (Aldous-Broder random walk).
inline CutTree random_spanning_tree(const Polytope3& p, std::mt19937_64& rng) {
  const auto arcs = dual_edges(p);
  const std::size_t f = p.faces.size();
  std::vector<std::vector<std::pair<std::size_t, Edge>>> adj(f);
  for (const auto& d : arcs) {
    adj[d.face_a].emplace_back(d.face_b, d.edge);
    adj[d.face_b].emplace_back(d.face_a, d.edge);
  }
  std::vector<char> seen(f, 0);
  std::size_t cur = 0, count = 1;
  seen[0] = 1;
  CutTree t;
  while (count < f) {
    std::uniform_int_distribution<std::size_t> pick(0, adj[cur].size() - 1);
    const auto& [next, edge] = adj[cur][pick(rng)];
    if (!seen[next]) {
      seen[next] = 1;
      ++count;
      t.fold_edges.push_back(edge);
    }
    cur = next;
  }
  std::sort(t.fold_edges.begin(), t.fold_edges.end());
  return t;
}

enum class SearchStrategy { exhaustive, random };

struct UnfoldSearchResult {
  bool found = false;                 // some evaluated net does not overlap
  std::optional<Net> first_nonoverlapping;
  std::optional<Net> first_overlapping;
  std::size_t trees_evaluated = 0;
  std::size_t overlapping = 0;
  std::size_t nonoverlapping = 0;
  bool enumeration_complete = false;  // exhaustive mode visited every tree
};

/// Evaluates up to `budget` cut trees (canonical enumeration order, or
/// uniform samples drawn from `seed`) and tallies overlapping and
/// non-overlapping nets. "First" refers to that order, so results do not
/// depend on `jobs`.
inline UnfoldSearchResult search_nonoverlapping(const Polytope3& p, SearchStrategy strategy, std::size_t budget,
                                                std::uint64_t seed = 0, unsigned jobs = 1,
                                                const Tolerance& tol = {}) {
  if (budget < 1) throw InputError("budget must be >= 1");
  p.validate();
  std::vector<CutTree> trees;
  UnfoldSearchResult res;
  if (strategy == SearchStrategy::exhaustive) {
    enumerate_spanning_trees(p, budget, [&](const CutTree& t) {
      trees.push_back(t);
      return true;
    });
    res.enumeration_complete = trees.size() < budget || static_cast<double>(trees.size()) == spanning_tree_count(p);
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < budget; ++i) trees.push_back(random_spanning_tree(p, rng));
  }
  std::vector<char> overlaps(trees.size(), 0);
  parallel_for(trees.size(), jobs, [&](std::size_t i) { overlaps[i] = check_overlap(unfold(p, trees[i]), tol).overlapping; });
  res.trees_evaluated = trees.size();
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (overlaps[i]) {
      ++res.overlapping;
      if (!res.first_overlapping) res.first_overlapping = unfold(p, trees[i]);
    } else {
      ++res.nonoverlapping;
      if (!res.first_nonoverlapping) res.first_nonoverlapping = unfold(p, trees[i]);
    }
  }
  res.found = res.first_nonoverlapping.has_value();
  return res;
}

} // namespace vadu
