#pragma once

// k-linkage of finite simple graphs: for every choice of k disjoint terminal
// pairs, are there k pairwise vertex-disjoint connecting paths? Decided by
// exhaustive search over induced paths.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vadu/errors.hpp"
#include "vadu/parallel.hpp"

namespace vadu {

class Graph {
public:
  Graph() = default;
  Graph(std::size_t vertex_count, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
      : adj_(vertex_count), matrix_(vertex_count * vertex_count, 0) {
    if (vertex_count == 0) throw InputError("graph needs at least one vertex");
    for (auto [u, v] : edges) add_edge(u, v);
  }

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_[v]; }
  bool adjacent(std::size_t u, std::size_t v) const { return matrix_[u * adj_.size() + v] != 0; }
  /// Edges as (min, max) pairs in insertion order.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

  void add_edge(std::size_t u, std::size_t v) {
    const std::size_t n = adj_.size();
    if (u >= n || v >= n)
      throw InputError("edge [" + std::to_string(u) + "," + std::to_string(v) + "] has an index out of range");
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    if (adjacent(u, v))
      throw InputError("duplicate edge [" + std::to_string(u) + "," + std::to_string(v) + "]");
    matrix_[u * n + v] = matrix_[v * n + u] = 1;
    adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
    adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }

  bool connected() const {
    std::vector<char> seen(vertex_count(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : adj_[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    return count == vertex_count();
  }

private:
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<char> matrix_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

using Path = std::vector<std::size_t>;

/// k terminal pairs (s_i, t_i); all 2k terminals distinct.
struct Pairing {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  void validate(const Graph& g) const {
    std::set<std::size_t> seen;
    for (auto [s, t] : pairs) {
      for (std::size_t v : {s, t}) {
        if (v >= g.vertex_count()) throw InputError("terminal " + std::to_string(v) + " out of range");
        if (!seen.insert(v).second) throw InputError("terminal " + std::to_string(v) + " used twice");
      }
    }
  }
  friend bool operator==(const Pairing&, const Pairing&) = default;
  friend auto operator<=>(const Pairing&, const Pairing&) = default;
};

struct LinkageResult {
  bool linked = false;
  std::optional<std::vector<Path>> witness_paths; // for the failing/last pairing when applicable
  std::optional<Pairing> failing_pairing;
  std::uint64_t pairings_checked = 0;
  std::vector<std::string> warnings;
};

/// True iff the paths are pairwise vertex-disjoint, simple, follow edges and
/// connect the pairs in order.
inline bool verify_paths(const Graph& g, const Pairing& y, const std::vector<Path>& paths) {
  if (paths.size() != y.pairs.size()) return false;
  std::vector<char> used(g.vertex_count(), 0);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = paths[i];
    if (p.size() < 2 || p.front() != y.pairs[i].first || p.back() != y.pairs[i].second) return false;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] >= g.vertex_count() || used[p[j]]) return false;
      used[p[j]] = 1;
      if (j > 0 && !g.adjacent(p[j - 1], p[j])) return false;
    }
  }
  return true;
}

constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

namespace detail {

class DisjointPathSearch {
public:
  DisjointPathSearch(const Graph& g, const Pairing& y, std::uint64_t budget)
      : g_(g), y_(y), budget_(budget), blocked_(g.vertex_count(), 0) {
    for (auto [s, t] : y.pairs) blocked_[s] = blocked_[t] = 1;
  }

  std::optional<std::vector<Path>> run() {
    if (route(0)) return paths_;
    return std::nullopt;
  }

private:
  void tick() {
    if (++nodes_ > budget_) throw BudgetError("disjoint-path search exceeded node budget; undecided");
  }

  // Can t be reached from s through vertices that are not blocked?
  bool reachable(std::size_t s, std::size_t t) const {
    std::vector<char> seen(g_.vertex_count(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : g_.neighbors(v)) {
        if (w == t) return true;
        if (!seen[w] && !blocked_[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return false;
  }

  bool remaining_reachable(std::size_t from) const {
    for (std::size_t i = from; i < y_.pairs.size(); ++i)
      if (!reachable(y_.pairs[i].first, y_.pairs[i].second)) return false;
    return true;
  }

  bool route(std::size_t i) {
    if (i == y_.pairs.size()) return true;
    if (!remaining_reachable(i)) return false;
    current_ = {y_.pairs[i].first};
    return extend(i);
  }

  // Only induced paths are explored: a chord would shortcut the path onto a
  // subset of its vertices, which keeps any solution disjoint.
  bool extend(std::size_t i) {
    tick();
    const std::size_t t = y_.pairs[i].second;
    const std::size_t end = current_.back();
    if (g_.adjacent(end, t)) {
      // Completing here uses a subset of the vertices of any longer route.
      Path saved = current_;
      paths_.push_back(current_);
      paths_.back().push_back(t);
      if (route(i + 1)) return true;
      paths_.pop_back();
      current_ = std::move(saved);
      return false;
    }
    for (std::size_t w : g_.neighbors(end)) {
      if (blocked_[w]) continue;
      bool chord = false;
      for (std::size_t k = 0; k + 1 < current_.size() && !chord; ++k) chord = g_.adjacent(current_[k], w);
      if (chord) continue;
      blocked_[w] = 1;
      current_.push_back(w);
      const bool ok = extend(i);
      current_.pop_back();
      blocked_[w] = 0;
      if (ok) return true;
    }
    return false;
  }

  const Graph& g_;
  const Pairing& y_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<char> blocked_;
  Path current_;
  std::vector<Path> paths_;
};

} // namespace detail

/// k pairwise vertex-disjoint paths joining the pairs of y, or nullopt if
/// none exist. Exact; throws BudgetError ("undecided") when the backtracking
/// node budget is exceeded.
inline std::optional<std::vector<Path>> find_disjoint_paths(const Graph& g, const Pairing& y,
                                                            std::uint64_t node_budget = kDefaultNodeBudget) {
  y.validate(g);
  if (y.pairs.empty()) return std::vector<Path>{};
  auto paths = detail::DisjointPathSearch(g, y, node_budget).run();
  if (paths && !verify_paths(g, y, *paths)) throw std::logic_error("disjoint-path search produced invalid witness");
  return paths;
}

/// Number of unordered sets of k disjoint unordered pairs from n vertices:
/// C(n, 2k) (2k-1)!!, saturating at UINT64_MAX.
inline std::uint64_t pairing_count(std::size_t n, std::size_t k) {
  if (2 * k > n) return 0;
  long double c = 1;
  for (std::size_t i = 0; i < 2 * k; ++i) c = c * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
  for (std::size_t j = 1; j < 2 * k; j += 2) c *= static_cast<long double>(j);
  if (c >= 1.8e19L) return UINT64_MAX;
  return static_cast<std::uint64_t>(c + 0.5L);
}

/// Enumerates pairings with s_1 < s_2 < ... and s_i < t_i; the visiting
/// order is lexicographic in the pair list.
class PairingEnumerator {
public:
  PairingEnumerator(std::size_t n, std::size_t k) : n_(n), k_(k), used_(n, 0) {}

  /// Calls visit(pairing) in lexicographic order until it returns false.
  template <class Visit>
  void for_each(Visit&& visit) {
    Pairing p;
    walk(p, 0, visit);
  }

private:
  template <class Visit>
  bool walk(Pairing& p, std::size_t min_s, Visit& visit) {
    if (p.pairs.size() == k_) return visit(static_cast<const Pairing&>(p));
    const std::size_t left = k_ - p.pairs.size();
    for (std::size_t s = min_s; s < n_; ++s) {
      if (used_[s]) continue;
      // Need 2*left free vertices >= s.
      std::size_t free_after = 0;
      for (std::size_t v = s; v < n_; ++v) free_after += !used_[v];
      if (free_after < 2 * left) return true;
      used_[s] = 1;
      for (std::size_t t = s + 1; t < n_; ++t) {
        if (used_[t]) continue;
        used_[t] = 1;
        p.pairs.emplace_back(s, t);
        const bool go_on = walk(p, s + 1, visit);
        p.pairs.pop_back();
        used_[t] = 0;
        if (!go_on) {
          used_[s] = 0;
          return false;
        }
      }
      used_[s] = 0;
    }
    return true;
  }

  std::size_t n_, k_;
  std::vector<char> used_;
};

struct LinkageOptions {
  std::uint64_t node_budget = kDefaultNodeBudget;
  std::uint64_t pairing_warning_cap = 1'000'000;
  unsigned jobs = 1;
};

/// Checks every pairing; on failure reports the lexicographically smallest
/// failing pairing. Pairings are processed in batches so the reported
/// counterexample does not depend on `jobs`.
inline LinkageResult is_k_linked(const Graph& g, std::size_t k, const LinkageOptions& opt = {}) {
  if (k == 0) throw InputError("k must be positive");
  if (2 * k > g.vertex_count())
    throw InputError("k=" + std::to_string(k) + " needs 2k <= vertex count (" + std::to_string(g.vertex_count()) +
                     ")");
  LinkageResult res;
  const std::uint64_t total = pairing_count(g.vertex_count(), k);
  if (total > opt.pairing_warning_cap)
    res.warnings.push_back("pairing count " + std::to_string(total) + " exceeds cap " +
                           std::to_string(opt.pairing_warning_cap));

  constexpr std::size_t batch_size = 4096;
  std::vector<Pairing> batch;
  bool failed = false;
  const auto flush = [&] {
    std::vector<char> ok(batch.size(), 1);
    parallel_for(batch.size(), opt.jobs, [&](std::size_t i) {
      ok[i] = find_disjoint_paths(g, batch[i], opt.node_budget).has_value();
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ++res.pairings_checked;
      if (!ok[i]) {
        res.failing_pairing = batch[i];
        failed = true;
        return;
      }
    }
    batch.clear();
  };
  PairingEnumerator(g.vertex_count(), k).for_each([&](const Pairing& p) {
    batch.push_back(p);
    if (batch.size() == batch_size) flush();
    return !failed;
  });
  if (!failed && !batch.empty()) flush();
  res.linked = !failed;
  return res;
}

} // namespace vadu
