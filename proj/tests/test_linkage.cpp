#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "vadu/linkage.hpp"

using namespace vadu;

namespace {

Graph complete(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

Graph cycle(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

Graph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return Graph(n, e);
}

bool reach_avoiding(const Graph& g, std::size_t s, std::size_t t, const std::vector<char>& banned) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<std::size_t> q{s};
  seen[s] = 1;
  for (std::size_t h = 0; h < q.size(); ++h) {
    if (q[h] == t) return true;
    for (std::size_t w : g.neighbors(q[h]))
      if (!seen[w] && !banned[w]) {
        seen[w] = 1;
        q.push_back(w);
      }
  }
  return false;
}

// Two disjoint paths exist iff some simple s1-t1 path avoiding s2, t2 leaves
// t2 reachable from s2 in the rest of the graph.
bool two_paths_oracle(const Graph& g, std::size_t s1, std::size_t t1, std::size_t s2, std::size_t t2) {
  std::vector<char> on(g.vertex_count(), 0);
  std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
    on[v] = 1;
    if (v == t1) {
      const bool ok = reach_avoiding(g, s2, t2, on);
      on[v] = 0;
      return ok;
    }
    for (std::size_t w : g.neighbors(v))
      if (!on[w] && w != s2 && w != t2 && dfs(w)) {
        on[v] = 0;
        return true;
      }
    on[v] = 0;
    return false;
  };
  return dfs(s1);
}

} // namespace

TEST(Graph, Validation) {
  EXPECT_THROW(Graph(0, {}), InputError);
  EXPECT_THROW(Graph(3, {{0, 3}}), InputError);
  EXPECT_THROW(Graph(3, {{1, 1}}), InputError);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), InputError);
  const Graph g(4, {{2, 1}, {0, 3}});
  EXPECT_EQ(g.edges(), (std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}, {0, 3}}));
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_FALSE(g.adjacent(0, 1));
  EXPECT_FALSE(g.connected());
  EXPECT_TRUE(cycle(5).connected());
}

TEST(Pairing, ValidationRejectsRepeatedTerminals) {
  const Graph g = complete(4);
  EXPECT_THROW((Pairing{{{0, 1}, {1, 2}}}.validate(g)), InputError);
  EXPECT_THROW((Pairing{{{0, 4}}}.validate(g)), InputError);
  EXPECT_THROW((Pairing{{{2, 2}}}.validate(g)), InputError);
}

TEST(PairingEnumerator, CountsAndOrder) {
  for (std::size_t n = 0; n <= 8; ++n)
    for (std::size_t k = 1; 2 * k <= n; ++k) {
      std::vector<Pairing> seen;
      PairingEnumerator(n, k).for_each([&](const Pairing& p) {
        seen.push_back(p);
        return true;
      });
      EXPECT_EQ(seen.size(), pairing_count(n, k)) << n << "," << k;
      EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
      EXPECT_EQ(std::set<Pairing>(seen.begin(), seen.end()).size(), seen.size());
      for (const auto& p : seen) {
        std::set<std::size_t> used;
        for (std::size_t i = 0; i < p.pairs.size(); ++i) {
          EXPECT_LT(p.pairs[i].first, p.pairs[i].second);
          if (i) {
            EXPECT_LT(p.pairs[i - 1].first, p.pairs[i].first);
          }
          used.insert(p.pairs[i].first);
          used.insert(p.pairs[i].second);
        }
        EXPECT_EQ(used.size(), 2 * k);
      }
    }
  EXPECT_EQ(pairing_count(6, 3), 15u);
  EXPECT_EQ(pairing_count(5, 3), 0u);
  EXPECT_EQ(pairing_count(10, 2), 630u);
}

TEST(PairingEnumerator, StopsWhenVisitReturnsFalse) {
  int calls = 0;
  PairingEnumerator(8, 2).for_each([&](const Pairing&) { return ++calls < 5; });
  EXPECT_EQ(calls, 5);
}

TEST(DisjointPaths, WitnessesAreValid) {
  const Graph g = complete(6);
  const Pairing y{{{0, 3}, {1, 4}, {2, 5}}};
  const auto paths = find_disjoint_paths(g, y);
  ASSERT_TRUE(paths);
  EXPECT_TRUE(verify_paths(g, y, *paths));
  // Cycle: the crossing pairs cannot both be routed.
  EXPECT_FALSE(find_disjoint_paths(cycle(4), Pairing{{{0, 2}, {1, 3}}}));
  EXPECT_TRUE(find_disjoint_paths(cycle(4), Pairing{{{0, 1}, {2, 3}}}));
}

TEST(DisjointPaths, VerifyRejectsBadPaths) {
  const Graph g = cycle(5);
  const Pairing y{{{0, 2}}};
  EXPECT_TRUE(verify_paths(g, y, {{0, 1, 2}}));
  EXPECT_FALSE(verify_paths(g, y, {{0, 2}}));           // not an edge
  EXPECT_FALSE(verify_paths(g, y, {{2, 1, 0}}));        // wrong direction
  EXPECT_FALSE(verify_paths(g, y, {{0, 1, 0, 1, 2}}));  // not simple
  EXPECT_FALSE(verify_paths(g, y, {}));
  const Pairing two{{{0, 1}, {2, 3}}};
  EXPECT_FALSE(verify_paths(g, two, {{0, 1}, {2, 1, 2, 3}}));
}

TEST(DisjointPaths, MatchesTwoPathOracle) {
  std::mt19937_64 rng(31);
  int yes = 0, no = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 4 + trial % 6;
    const Graph g = random_graph(rng, n, 0.45);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Pairing y{{{perm[0], perm[1]}, {perm[2], perm[3]}}};
    const bool expect = two_paths_oracle(g, perm[0], perm[1], perm[2], perm[3]);
    const auto got = find_disjoint_paths(g, y);
    EXPECT_EQ(got.has_value(), expect) << "trial " << trial;
    if (got) {
      EXPECT_TRUE(verify_paths(g, y, *got));
    }
    (expect ? yes : no)++;
  }
  EXPECT_GT(yes, 10);
  EXPECT_GT(no, 10);
}

TEST(Linkage, GroundTruths) {
  EXPECT_TRUE(is_k_linked(complete(4), 2).linked);
  EXPECT_TRUE(is_k_linked(complete(6), 3).linked);
  const auto c4 = is_k_linked(cycle(4), 2);
  EXPECT_FALSE(c4.linked);
  ASSERT_TRUE(c4.failing_pairing);
  EXPECT_EQ(c4.failing_pairing->pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 3}}));
  EXPECT_EQ(c4.pairings_checked, 2u);  // {(0,1),(2,3)} succeeds first
  // Two triangles joined by a bridge: connected, so 1-linked, but not 2-linked.
  const Graph bowtie(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}});
  EXPECT_TRUE(is_k_linked(bowtie, 1).linked);
  EXPECT_FALSE(is_k_linked(bowtie, 2).linked);
  EXPECT_FALSE(is_k_linked(Graph(3, {{0, 1}}), 1).linked);
}

TEST(Linkage, OneLinkedIffConnected) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = random_graph(rng, 2 + trial % 8, 0.3);
    EXPECT_EQ(is_k_linked(g, 1).linked, g.connected());
  }
}

TEST(Linkage, JobsDoNotChangeTheReport) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_graph(rng, 8, 0.6);
    LinkageOptions one, many;
    many.jobs = 4;
    const auto a = is_k_linked(g, 2, one);
    const auto b = is_k_linked(g, 2, many);
    EXPECT_EQ(a.linked, b.linked);
    EXPECT_EQ(a.failing_pairing, b.failing_pairing);
    EXPECT_EQ(a.pairings_checked, b.pairings_checked);
  }
}

TEST(Linkage, BudgetAndArgumentErrors) {
  LinkageOptions tiny;
  tiny.node_budget = 2;
  EXPECT_THROW(is_k_linked(complete(8), 3, tiny), BudgetError);
  EXPECT_THROW(is_k_linked(cycle(4), 3), InputError);
  EXPECT_THROW(is_k_linked(cycle(4), 0), InputError);
  LinkageOptions capped;
  capped.pairing_warning_cap = 10;
  const auto r = is_k_linked(complete(6), 2, capped);
  EXPECT_TRUE(r.linked);
  EXPECT_EQ(r.warnings.size(), 1u);
}
