#pragma once

// Exact polytope-family transform
//
//   C(g)  = conv( union over P in Omega of argmax_{x in P} <x, g> )
//   F(Om) = { C(g) : g a nonzero direction }
//
// and detection of the eventual cycle of Omega, F(Omega), F(F(Omega)), ...
// In dimension <= 2 the direction set is enumerated completely: C is
// constant on each open arc between consecutive critical directions, so one
// direction per critical ray plus one per open arc realizes every value.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vadu/errors.hpp"
#include "vadu/hull.hpp"
#include "vadu/parallel.hpp"
#include "vadu/rational.hpp"

namespace vadu {

/// Convex polytope in V-representation: vertices are exactly the extreme
/// points, sorted lexicographically.
class RationalPolytope {
public:
  RationalPolytope() = default;

  static RationalPolytope hull_of(std::vector<RatVec> points) {
    RationalPolytope p;
    p.vertices_ = extreme_points(std::move(points));
    return p;
  }

  const std::vector<RatVec>& vertices() const { return vertices_; }
  std::size_t dim() const { return vertices_.front().dim(); }

  RationalPolytope translated(const RatVec& t) const {
    RationalPolytope p(*this);
    for (auto& v : p.vertices_) v = v + t;
    return p;
  }

  friend bool operator==(const RationalPolytope&, const RationalPolytope&) = default;
  friend std::strong_ordering operator<=>(const RationalPolytope& a, const RationalPolytope& b) {
    return std::lexicographical_compare_three_way(a.vertices_.begin(), a.vertices_.end(), b.vertices_.begin(),
                                                  b.vertices_.end());
  }

private:
  std::vector<RatVec> vertices_;
};

/// Finite set of polytopes in canonical (sorted, duplicate-free) order.
class Family {
public:
  Family() = default;
  Family(std::size_t dim, std::vector<RationalPolytope> members) : dim_(dim), members_(std::move(members)) {
    if (dim_ == 0) throw InputError("family dimension must be >= 1");
    for (const auto& m : members_)
      if (m.vertices().empty() || m.dim() != dim_) throw InputError("family member has wrong dimension");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::size_t dim() const { return dim_; }
  const std::vector<RationalPolytope>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  Family translated(const RatVec& t) const {
    std::vector<RationalPolytope> m;
    for (const auto& p : members_) m.push_back(p.translated(t));
    return Family(dim_, std::move(m));
  }

  friend bool operator==(const Family&, const Family&) = default;

private:
  std::size_t dim_ = 0;
  std::vector<RationalPolytope> members_;
};

/// Canonical text form: sorted exact vertex lists. Equal families have equal
/// keys and vice versa.
inline std::string canonical_key(const Family& f) {
  std::string s = std::to_string(f.dim()) + ":";
  for (const auto& p : f.members()) {
    s += "[";
    for (const auto& v : p.vertices()) s += to_string(v);
    s += "]";
  }
  return s;
}

/// 64-bit FNV-1a of canonical_key, as 16 hex digits.
inline std::string family_hash(const Family& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_key(f)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// All distinct vertices of all members, sorted.
inline std::vector<RatVec> vertex_pool(const Family& f) {
  std::vector<RatVec> pool;
  for (const auto& p : f.members()) pool.insert(pool.end(), p.vertices().begin(), p.vertices().end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

/// A ray: nonzero vector in primitive integer form (coprime integer coordinates).
class Direction {
public:
  explicit Direction(const RatVec& g) {
    BigInt l = 1;
    bool nonzero = false;
    for (const auto& c : g.coords) {
      l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(c));
      nonzero = nonzero || c != 0;
    }
    if (!nonzero) throw InputError("direction must be nonzero");
    std::vector<BigInt> ints;
    BigInt gcd = 0;
    for (const auto& c : g.coords) {
      ints.push_back(boost::multiprecision::numerator(c) * (l / boost::multiprecision::denominator(c)));
      gcd = boost::multiprecision::gcd(gcd, abs(ints.back()));
    }
    for (auto& x : ints) v_.coords.emplace_back(x / gcd);
  }

  const RatVec& vector() const { return v_; }
  std::size_t dim() const { return v_.dim(); }

  friend bool operator==(const Direction&, const Direction&) = default;

private:
  RatVec v_;
};

/// Vertices of P maximizing <v, g>, in P's vertex order.
inline std::vector<RatVec> support_vertices(const RationalPolytope& p, const RatVec& g) {
  if (p.dim() != g.dim()) throw InputError("support_vertices: dimension mismatch");
  std::vector<RatVec> out;
  std::optional<Rat> best;
  for (const auto& v : p.vertices()) {
    Rat s = dot(v, g);
    if (!best || s > *best) {
      best = std::move(s);
      out.clear();
      out.push_back(v);
    } else if (s == *best) {
      out.push_back(v);
    }
  }
  return out;
}

inline std::vector<RatVec> support_vertices(const RationalPolytope& p, const Direction& g) {
  return support_vertices(p, g.vector());
}

inline RationalPolytope build_C(const Family& omega, const RatVec& g) {
  if (omega.size() == 0) throw InputError("build_C: empty family");
  std::vector<RatVec> pts;
  for (const auto& p : omega.members()) {
    auto s = support_vertices(p, g);
    pts.insert(pts.end(), s.begin(), s.end());
  }
  return RationalPolytope::hull_of(std::move(pts));
}

inline RationalPolytope build_C(const Family& omega, const Direction& g) { return build_C(omega, g.vector()); }

namespace detail {

// Half-plane index for exact angular sorting: angle in [0, pi) -> 0, else 1.
inline int angular_half(const RatVec& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; }

inline bool angle_less(const RatVec& a, const RatVec& b) {
  const int ha = angular_half(a), hb = angular_half(b);
  if (ha != hb) return ha < hb;
  return a[0] * b[1] - a[1] * b[0] > 0;
}

inline RatVec rotate_ccw(const RatVec& v) { return RatVec{-v[1], v[0]}; }

} // namespace detail

/// Direction list on which C realizes every value it takes on the unit
/// sphere. Dimension 1: {+1, -1}. Dimension 2: every primitive normal of
/// v - w for distinct vertices v, w of a common member (both signs), sorted
/// by angle, with one direction from the interior of each open arc between
/// consecutive critical rays interleaved.
inline std::vector<Direction> critical_directions(const Family& omega) {
  if (omega.dim() == 1) return {Direction(rat_vec({1})), Direction(rat_vec({-1}))};
  if (omega.dim() != 2)
    throw UnsupportedModeError("exact direction enumeration supports dimension <= 2; use sampled mode");

  std::set<RatVec> rays;
  for (const auto& p : omega.members()) {
    const auto& vs = p.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        const RatVec n = detail::rotate_ccw(vs[j] - vs[i]);
        rays.insert(Direction(n).vector());
        rays.insert(Direction(Rat(-1) * n).vector());
      }
  }
  if (rays.empty()) return {Direction(rat_vec({1, 0}))};

  std::vector<RatVec> sorted(rays.begin(), rays.end());
  std::sort(sorted.begin(), sorted.end(), detail::angle_less);
  std::vector<Direction> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const RatVec& u = sorted[i];
    const RatVec& w = sorted[(i + 1) % sorted.size()];
    out.emplace_back(u);
    // Rays come in +- pairs, so consecutive rays are at most pi apart; at
    // exactly pi the CCW perpendicular lies inside the arc.
    const Rat cross = u[0] * w[1] - u[1] * w[0];
    out.emplace_back(cross > 0 ? u + w : detail::rotate_ccw(u));
  }
  return out;
}

enum class DirectionMode { exact, sampled };

struct TransformOptions {
  DirectionMode mode = DirectionMode::exact;
  std::size_t samples = 4096;      // sampled mode only
  long long sample_bound = 1000;   // integer coordinates drawn from [-bound, bound]
  std::uint64_t seed = 0;
};

/// Random nonzero integer directions for dimension >= 3. The resulting
/// transform is incomplete: C values on lower-dimensional normal-fan cells
/// may be missed.
inline std::vector<Direction> sampled_directions(std::size_t dim, const TransformOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<long long> coord(-opt.sample_bound, opt.sample_bound);
  std::vector<Direction> out;
  while (out.size() < opt.samples) {
    RatVec g;
    bool nonzero = false;
    for (std::size_t i = 0; i < dim; ++i) {
      g.coords.emplace_back(coord(rng));
      nonzero = nonzero || g.coords.back() != 0;
    }
    if (nonzero) out.emplace_back(g);
  }
  return out;
}

namespace detail {

// Evaluates C on every direction against a shared vertex pool: each
// direction costs one exact dot product per distinct vertex, and C is only
// hulled once per distinct union of support sets.
inline Family transform_over(const Family& omega, const std::vector<Direction>& dirs) {
  const std::vector<RatVec> pool = vertex_pool(omega);
  std::vector<std::vector<std::size_t>> member_idx;
  for (const auto& p : omega.members()) {
    std::vector<std::size_t> idx;
    for (const auto& v : p.vertices())
      idx.push_back(static_cast<std::size_t>(std::lower_bound(pool.begin(), pool.end(), v) - pool.begin()));
    member_idx.push_back(std::move(idx));
  }

  std::set<std::vector<bool>> unions;
  std::vector<Rat> dots(pool.size());
  std::vector<std::size_t> order(pool.size());
  std::vector<std::size_t> rank(pool.size());
  for (const auto& d : dirs) {
    for (std::size_t i = 0; i < pool.size(); ++i) dots[i] = dot(pool[i], d.vector());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dots[a] < dots[b]; });
    for (std::size_t r = 0, level = 0; r < order.size(); ++r) {
      if (r > 0 && dots[order[r - 1]] < dots[order[r]]) ++level;
      rank[order[r]] = level;
    }
    std::vector<bool> pick(pool.size(), false);
    for (const auto& idx : member_idx) {
      std::size_t top = 0;
      for (std::size_t i : idx) top = std::max(top, rank[i]);
      for (std::size_t i : idx)
        if (rank[i] == top) pick[i] = true;
    }
    unions.insert(std::move(pick));
  }

  std::vector<RationalPolytope> out;
  for (const auto& pick : unions) {
    std::vector<RatVec> pts;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (pick[i]) pts.push_back(pool[i]);
    out.push_back(RationalPolytope::hull_of(std::move(pts)));
  }
  return Family(omega.dim(), std::move(out));
}

} // namespace detail

/// F(Omega). Exact mode requires dimension <= 2.
inline Family transform(const Family& omega, const TransformOptions& opt = {}) {
  if (omega.size() == 0) throw InputError("transform: empty family");
  if (opt.mode == DirectionMode::exact) return detail::transform_over(omega, critical_directions(omega));
  return detail::transform_over(omega, sampled_directions(omega.dim(), opt));
}

struct CycleReport {
  std::size_t preperiod = 0;
  std::size_t period = 0;
  std::vector<Family> orbit;        // Omega_0 .. Omega_{preperiod+period}; last equals orbit[preperiod]
  std::vector<std::string> hashes;  // family_hash of each orbit entry
  bool exact = true;

  const Family& witness_first() const { return orbit[preperiod]; }
  const Family& witness_second() const { return orbit[preperiod + period]; }
};

/// Budget exhausted before the orbit repeated; carries the partial orbit.
class CycleBudgetError : public BudgetError {
public:
  CycleBudgetError(std::vector<Family> partial)
      : BudgetError("no repeat within " + std::to_string(partial.size() - 1) + " transform steps"),
        partial_(std::move(partial)) {}
  const std::vector<Family>& partial_orbit() const { return partial_; }

private:
  std::vector<Family> partial_;
};

inline CycleReport detect_cycle(const Family& omega0, std::size_t max_steps, const TransformOptions& opt = {}) {
  if (max_steps < 1) throw InputError("maxSteps must be >= 1");
  CycleReport rep;
  rep.exact = opt.mode == DirectionMode::exact;
  std::unordered_map<std::string, std::size_t> seen;
  rep.orbit.push_back(omega0);
  seen.emplace(canonical_key(omega0), 0);
  for (std::size_t step = 1; step <= max_steps; ++step) {
    Family next = transform(rep.orbit.back(), opt);
    auto key = canonical_key(next);
    rep.orbit.push_back(std::move(next));
    if (auto it = seen.find(key); it != seen.end()) {
      rep.preperiod = it->second;
      rep.period = step - it->second;
      for (const auto& f : rep.orbit) rep.hashes.push_back(family_hash(f));
      return rep;
    }
    seen.emplace(std::move(key), step);
  }
  throw CycleBudgetError(std::move(rep.orbit));
}

/// Replays the transform from orbit[0] and checks every recorded family, the
/// closing equality and minimality of the period.
inline bool verify_cycle(const CycleReport& rep, const TransformOptions& opt = {}) {
  if (rep.period == 0 || rep.orbit.size() != rep.preperiod + rep.period + 1) return false;
  for (std::size_t i = 0; i + 1 < rep.orbit.size(); ++i)
    if (!(transform(rep.orbit[i], opt) == rep.orbit[i + 1])) return false;
  if (!(rep.orbit[rep.preperiod] == rep.orbit.back())) return false;
  for (std::size_t i = 0; i + 1 < rep.orbit.size(); ++i)
    for (std::size_t j = i + 1; j + 1 < rep.orbit.size(); ++j)
      if (rep.orbit[i] == rep.orbit[j]) return false;
  return true;
}

struct RandomFamilyParams {
  std::size_t dim = 2;
  std::size_t min_members = 1;
  std::size_t max_members = 4;
  std::size_t min_vertices = 1;
  std::size_t max_vertices = 6;
  long long coord_bound = 5;
  std::uint64_t seed = 0;

  void validate() const {
    if (dim < 1) throw InputError("dimension must be >= 1");
    if (min_members < 1 || min_members > max_members) throw InputError("invalid member count range");
    if (min_vertices < 1 || min_vertices > max_vertices) throw InputError("invalid vertex count range");
    if (coord_bound < 0) throw InputError("coordinate bound must be >= 0");
  }
};

/// Members are hulls of random integer points in [-B, B]^dim. Trial t is
/// generated from (seed, t) alone.
inline Family random_family(const RandomFamilyParams& prm, std::uint64_t trial) {
  prm.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(prm.seed), static_cast<std::uint32_t>(prm.seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> members(prm.min_members, prm.max_members);
  std::uniform_int_distribution<std::size_t> verts(prm.min_vertices, prm.max_vertices);
  std::uniform_int_distribution<long long> coord(-prm.coord_bound, prm.coord_bound);
  std::vector<RationalPolytope> out;
  const std::size_t m = members(rng);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<RatVec> pts(verts(rng));
    for (auto& p : pts)
      for (std::size_t i = 0; i < prm.dim; ++i) p.coords.emplace_back(coord(rng));
    out.push_back(RationalPolytope::hull_of(std::move(pts)));
  }
  return Family(prm.dim, std::move(out));
}

struct SearchStats {
  std::size_t trials = 0;
  std::size_t budget_exhausted = 0;
  std::size_t replay_failures = 0;
  std::map<std::size_t, std::size_t> period_histogram;
  std::map<std::size_t, std::size_t> preperiod_histogram;
  std::vector<std::pair<std::uint64_t, CycleReport>> long_period; // (trial, report) with period > 2
};

/// Runs detect_cycle on independent random families and aggregates the
/// observed periods. Every period found is re-verified by replay. Results are
/// merged in trial order, so output is independent of `jobs`.
inline SearchStats random_family_search(const RandomFamilyParams& prm, std::size_t trials, std::size_t max_steps,
                                        unsigned jobs = 1) {
  if (trials < 1) throw InputError("trials must be >= 1");
  TransformOptions opt;
  if (prm.dim > 2) {
    opt.mode = DirectionMode::sampled;
    opt.seed = prm.seed;
  }
  std::vector<std::optional<CycleReport>> reports(trials);
  std::vector<char> replay_ok(trials, 0);
  parallel_for(trials, jobs, [&](std::size_t t) {
    try {
      reports[t] = detect_cycle(random_family(prm, t), max_steps, opt);
      replay_ok[t] = verify_cycle(*reports[t], opt);
    } catch (const BudgetError&) {
    }
  });
  SearchStats st;
  st.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    if (!reports[t]) {
      ++st.budget_exhausted;
      continue;
    }
    if (!replay_ok[t]) ++st.replay_failures;
    ++st.period_histogram[reports[t]->period];
    ++st.preperiod_histogram[reports[t]->preperiod];
    if (reports[t]->period > 2) st.long_period.emplace_back(t, std::move(*reports[t]));
  }
  return st;
}

} // namespace vadu
