#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "vadu/unfolding.hpp"

using namespace vadu;

namespace {

std::size_t count_trees(const Polytope3& p) {
  std::set<std::vector<Edge>> seen;
  const std::size_t n = enumerate_spanning_trees(p, 1'000'000, [&](const CutTree& t) {
    seen.insert(t.fold_edges);
    return true;
  });
  EXPECT_EQ(seen.size(), n);  // no tree visited twice
  return n;
}

double polygon_area(const Polygon2& poly) { return std::abs(signed_area(poly)); }

// A net is an isometric development: every placed face is congruent to the 3-D
// face (same edge lengths and diagonals), and folded faces share their edge.
void expect_isometric(const Polytope3& p, const Net& net) {
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    const auto& fc = p.faces[f];
    const auto& poly = net.placed[f].polygon;
    ASSERT_EQ(poly.size(), fc.size());
    EXPECT_NEAR(polygon_area(poly), p.face_area(f), 1e-12);
    EXPECT_GT(signed_area(poly), 0);  // orientation preserved
    for (std::size_t i = 0; i < fc.size(); ++i)
      for (std::size_t j = i + 1; j < fc.size(); ++j)
        EXPECT_NEAR(distance(poly[i], poly[j]), distance(p.vertex(fc[i]), p.vertex(fc[j])), 1e-12);
  }
  const auto pos = [&](std::size_t f, std::size_t v) {
    const auto& fc = p.faces[f];
    return net.placed[f].polygon[static_cast<std::size_t>(std::find(fc.begin(), fc.end(), v) - fc.begin())];
  };
  for (const auto& d : dual_edges(p)) {
    if (!std::binary_search(net.tree.fold_edges.begin(), net.tree.fold_edges.end(), d.edge)) continue;
    for (std::size_t v : {d.edge.first, d.edge.second})
      EXPECT_LT(distance(pos(d.face_a, v), pos(d.face_b, v)), 1e-12);
  }
}

} // namespace

TEST(Polytope, BuiltinsAreValid) {
  struct Case {
    const char* name;
    std::size_t v, e, f;
  };
  for (const auto& c : {Case{"tetrahedron", 4, 6, 4}, Case{"cube", 8, 12, 6}, Case{"octahedron", 6, 12, 8},
                        Case{"truncated-tetrahedron", 12, 18, 8}, Case{"truncated-tetrahedron-tall", 12, 18, 8}}) {
    const Polytope3 p = builtin_polytope(c.name);
    EXPECT_NO_THROW(p.validate()) << c.name;
    EXPECT_EQ(p.vertices.size(), c.v) << c.name;
    EXPECT_EQ(p.edges().size(), c.e) << c.name;
    EXPECT_EQ(p.faces.size(), c.f) << c.name;
  }
  EXPECT_THROW(builtin_polytope("dodecahedron"), InputError);
  EXPECT_NEAR(cube().surface_area(), 6, 1e-12);
}

TEST(Polytope, TruncatedTetrahedronFaces) {
  const Polytope3 p = truncated_tetrahedron();
  std::size_t tri = 0, hex = 0;
  for (const auto& f : p.faces) (f.size() == 3 ? tri : hex)++;
  EXPECT_EQ(tri, 4u);
  EXPECT_EQ(hex, 4u);
  // Archimedean: all edges have the same length.
  const auto es = p.edges();
  const double l0 = distance(p.vertex(es[0].first), p.vertex(es[0].second));
  for (auto [a, b] : es) EXPECT_NEAR(distance(p.vertex(a), p.vertex(b)), l0, 1e-12);
  EXPECT_THROW(truncated_tetrahedron(0.5), InputError);
  EXPECT_THROW(tall_truncated_tetrahedron(-1), InputError);
}

TEST(Polytope, ValidationCatchesBrokenSurfaces) {
  Polytope3 p = cube();
  std::reverse(p.faces[2].begin(), p.faces[2].end());
  EXPECT_THROW(p.validate(), InputError);  // orientation

  p = cube();
  p.vertices[7][2] += 0.1;
  EXPECT_THROW(p.validate(), InputError);  // non-planar face

  p = cube();
  p.faces.pop_back();
  EXPECT_THROW(p.validate(), InputError);  // open surface

  p = cube();
  p.faces[0][0] = 99;
  EXPECT_THROW(p.validate(), InputError);

  EXPECT_THROW(polytope_from_points({FloatVec{0, 0, 0}, FloatVec{1, 0, 0}, FloatVec{0, 1, 0}}), InputError);
}

TEST(Polytope, HullDropsInteriorPoints) {
  std::vector<FloatVec> pts = cube().vertices;
  pts.push_back(FloatVec{0.5, 0.5, 0.5});
  const Polytope3 p = polytope_from_points(pts);
  EXPECT_EQ(p.faces.size(), 6u);
  for (const auto& f : p.faces) EXPECT_EQ(f.size(), 4u);
}

TEST(SpanningTrees, MatrixTreeCounts) {
  EXPECT_EQ(spanning_tree_count(regular_tetrahedron()), 16);
  EXPECT_EQ(spanning_tree_count(cube()), 384);
  EXPECT_EQ(spanning_tree_count(regular_octahedron()), 384);
  EXPECT_EQ(spanning_tree_count(truncated_tetrahedron()), 6000);
}

TEST(SpanningTrees, EnumerationMatchesCount) {
  EXPECT_EQ(count_trees(regular_tetrahedron()), 16u);
  EXPECT_EQ(count_trees(cube()), 384u);
  EXPECT_EQ(count_trees(regular_octahedron()), 384u);
  EXPECT_EQ(count_trees(truncated_tetrahedron()), 6000u);
}

TEST(SpanningTrees, BudgetAndEarlyStop) {
  int calls = 0;
  EXPECT_EQ(enumerate_spanning_trees(cube(), 10, [&](const CutTree&) { return ++calls > 0; }), 10u);
  calls = 0;
  EXPECT_EQ(enumerate_spanning_trees(cube(), 100, [&](const CutTree&) { return ++calls < 3; }), 3u);
  EXPECT_EQ(enumerate_spanning_trees(cube(), 0, [](const CutTree&) { return true; }), 0u);
}

TEST(SpanningTrees, RandomTreesAreValidAndReproducible) {
  const Polytope3 p = cube();
  std::mt19937_64 a(5), b(5);
  std::set<std::vector<Edge>> distinct;
  for (int i = 0; i < 300; ++i) {
    const CutTree t = random_spanning_tree(p, a);
    EXPECT_EQ(t, random_spanning_tree(p, b));
    EXPECT_NO_THROW(unfold(p, t));
    distinct.insert(t.fold_edges);
  }
  // 300 uniform draws from 384 trees cover well over half of them.
  EXPECT_GT(distinct.size(), 200u);
}

TEST(Unfold, NetsAreIsometric) {
  for (const char* name : {"tetrahedron", "cube", "octahedron", "truncated-tetrahedron-tall"}) {
    const Polytope3 p = builtin_polytope(name);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
      SCOPED_TRACE(name);
      const Net net = unfold(p, random_spanning_tree(p, rng));
      expect_isometric(p, net);
    }
  }
}

TEST(Unfold, RejectsInvalidTrees) {
  const Polytope3 p = regular_tetrahedron();
  const auto es = p.edges();
  EXPECT_THROW(unfold(p, CutTree{{es[0], es[1]}}), InputError);  // too few folds
  // The three edges at a vertex join the three faces around it in a cycle.
  EXPECT_THROW(unfold(p, CutTree{{make_edge(0, 1), make_edge(0, 2), make_edge(0, 3)}}), InputError);
  // The three edges of one face are a star in the dual graph: a valid tree.
  const auto& f = p.faces[0];
  EXPECT_NO_THROW(unfold(p, CutTree{{make_edge(f[0], f[1]), make_edge(f[1], f[2]), make_edge(f[0], f[2])}}));
  EXPECT_THROW(unfold(cube(), CutTree{{{0, 7}, {0, 1}, {0, 2}, {0, 4}, {1, 3}}}), InputError);  // not an edge
}

TEST(Overlap, ArchimedeanTruncatedTetrahedronNeverOverlaps) {
  const Polytope3 p = truncated_tetrahedron();
  const auto r = search_nonoverlapping(p, SearchStrategy::exhaustive, 10000);
  EXPECT_TRUE(r.enumeration_complete);
  EXPECT_EQ(r.trees_evaluated, 6000u);
  EXPECT_EQ(r.nonoverlapping, 6000u);
  EXPECT_EQ(r.overlapping, 0u);
}

TEST(Overlap, TetrahedronAndCubeExhaustive) {
  const auto t = search_nonoverlapping(regular_tetrahedron(), SearchStrategy::exhaustive, 100);
  EXPECT_EQ(t.nonoverlapping, 16u);
  EXPECT_TRUE(t.enumeration_complete);
  const auto c = search_nonoverlapping(cube(), SearchStrategy::exhaustive, 384);
  EXPECT_EQ(c.trees_evaluated, 384u);
  EXPECT_TRUE(c.enumeration_complete);
  EXPECT_EQ(c.nonoverlapping, 384u);
  const auto partial = search_nonoverlapping(cube(), SearchStrategy::exhaustive, 50);
  EXPECT_FALSE(partial.enumeration_complete);
  EXPECT_EQ(partial.trees_evaluated, 50u);
}

TEST(Overlap, TallTruncatedTetrahedronHasOverlappingNets) {
  const Polytope3 p = tall_truncated_tetrahedron();
  const auto r = search_nonoverlapping(p, SearchStrategy::random, 300, 0);
  EXPECT_TRUE(r.found);
  ASSERT_TRUE(r.first_overlapping);
  const auto rep = check_overlap(*r.first_overlapping);
  EXPECT_TRUE(rep.overlapping);
  EXPECT_FALSE(rep.pairs.empty());
  EXPECT_FALSE(check_overlap(*r.first_nonoverlapping).overlapping);
  EXPECT_EQ(r.overlapping + r.nonoverlapping, 300u);
}

TEST(Overlap, JobsDoNotChangeSearch) {
  const Polytope3 p = tall_truncated_tetrahedron();
  const auto a = search_nonoverlapping(p, SearchStrategy::random, 200, 9, 1);
  const auto b = search_nonoverlapping(p, SearchStrategy::random, 200, 9, 4);
  EXPECT_EQ(a.overlapping, b.overlapping);
  EXPECT_EQ(a.first_overlapping.has_value(), b.first_overlapping.has_value());
  if (a.first_overlapping) {
    EXPECT_EQ(a.first_overlapping->tree, b.first_overlapping->tree);
  }
  EXPECT_EQ(a.first_nonoverlapping->tree, b.first_nonoverlapping->tree);
  EXPECT_THROW(search_nonoverlapping(p, SearchStrategy::random, 0), InputError);
}
