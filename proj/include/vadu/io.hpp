#pragma once

// JSON and CSV schemas for every module. Parsing errors are reported as
// InputError naming the offending field.

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vadu/dr_dynamics.hpp"
#include "vadu/dr_transform.hpp"
#include "vadu/enclosing_ball.hpp"
#include "vadu/errors.hpp"
#include "vadu/linkage.hpp"
#include "vadu/projections.hpp"
#include "vadu/unfolding.hpp"

namespace vadu::io {

using json = nlohmann::json;

// ---------------------------------------------------------------- helpers

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": invalid JSON: " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read \"" + path + "\"");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write \"" + path + "\"");
  out << content;
}

inline json read_json_file(const std::string& path) { return parse_json_text(read_file(path), path); }

inline const json& field(const json& j, const std::string& name, const std::string& where = "") {
  const std::string label = where.empty() ? name : where + "." + name;
  if (!j.is_object()) throw InputError("expected an object containing field '" + label + "'");
  auto it = j.find(name);
  if (it == j.end()) throw InputError("missing field '" + label + "'");
  return *it;
}

inline double get_number(const json& j, const std::string& label) {
  if (!j.is_number()) throw InputError("field '" + label + "' must be a number");
  return j.get<double>();
}

inline std::size_t get_index(const json& j, const std::string& label) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw InputError("field '" + label + "' must be a nonnegative integer");
  return j.get<std::size_t>();
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view s, const std::string& label) {
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw InputError("'" + label + "': cannot parse number \"" + std::string(s) + "\"");
  return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// ---------------------------------------------------------------- vectors

inline json to_json(const FloatVec& v) { return json(v.coords()); }

inline FloatVec float_vec_from_json(const json& j, const std::string& label) {
  if (!j.is_array() || j.empty()) throw InputError("field '" + label + "' must be a nonempty array of numbers");
  std::vector<double> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(get_number(j[i], label + "[" + std::to_string(i) + "]"));
  try {
    return FloatVec(std::move(c));
  } catch (const InputError&) {
    throw InputError("field '" + label + "' has a non-finite coordinate");
  }
}

inline Rat rat_from_json(const json& j, const std::string& label) {
  if (j.is_number_integer()) return Rat(BigInt(j.get<long long>()));
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const InputError& e) {
      throw InputError("field '" + label + "': " + e.what());
    }
  }
  throw InputError("field '" + label + "' must be a rational string \"p/q\" or an integer");
}

inline json to_json(const RatVec& v) {
  json a = json::array();
  for (const auto& c : v.coords) a.push_back(to_string(c));
  return a;
}

// ---------------------------------------------------------------- projections

inline SetDescriptor set_from_json(const json& j, const std::string& where) {
  const std::string kind = [&] {
    const json& k = field(j, "kind", where);
    if (!k.is_string()) throw InputError("field '" + where + ".kind' must be a string");
    return k.get<std::string>();
  }();
  const auto vec = [&](const char* name) { return float_vec_from_json(field(j, name, where), where + "." + name); };
  const auto num = [&](const char* name) { return get_number(field(j, name, where), where + "." + name); };
  SetDescriptor s;
  if (kind == "line")
    s = AffineLine{vec("point"), vec("direction")};
  else if (kind == "hyperplane")
    s = Hyperplane{vec("normal"), num("offset")};
  else if (kind == "halfspace")
    s = HalfSpace{vec("normal"), num("offset")};
  else if (kind == "sphere")
    s = Sphere{vec("center"), num("radius")};
  else if (kind == "ball")
    s = Ball{vec("center"), num("radius")};
  else if (kind == "ellipse")
    s = Ellipse{num("a"), num("b")};
  else if (kind == "psphere")
    s = PSphere{num("p")};
  else if (kind == "vpolytope") {
    const json& vs = field(j, "vertices", where);
    if (!vs.is_array() || vs.empty()) throw InputError("field '" + where + ".vertices' must be a nonempty array");
    VPolytope v;
    for (std::size_t i = 0; i < vs.size(); ++i)
      v.vertices.push_back(float_vec_from_json(vs[i], where + ".vertices[" + std::to_string(i) + "]"));
    s = v;
  } else
    throw InputError("field '" + where + ".kind' has unknown value \"" + kind + "\"");
  try {
    validate(s);
  } catch (const InputError& e) {
    throw InputError("field '" + where + "': " + e.what());
  }
  return s;
}

inline json to_json(const SetDescriptor& s) {
  json j;
  j["kind"] = kind_name(s);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineLine>) {
          j["point"] = to_json(v.point);
          j["direction"] = to_json(v.direction);
        } else if constexpr (std::is_same_v<T, Hyperplane> || std::is_same_v<T, HalfSpace>) {
          j["normal"] = to_json(v.normal);
          j["offset"] = v.offset;
        } else if constexpr (std::is_same_v<T, Sphere> || std::is_same_v<T, Ball>) {
          j["center"] = to_json(v.center);
          j["radius"] = v.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          j["a"] = v.a;
          j["b"] = v.b;
        } else if constexpr (std::is_same_v<T, PSphere>) {
          j["p"] = v.p;
        } else {
          j["vertices"] = json::array();
          for (const auto& x : v.vertices) j["vertices"].push_back(to_json(x));
        }
      },
      s);
  return j;
}

// ---------------------------------------------------------------- dr-dynamics

inline DRProblem problem_from_json(const json& j) {
  DRProblem p{set_from_json(field(j, "A"), "A"), set_from_json(field(j, "B"), "B"), 0.5, {}};
  if (j.contains("lambda")) p.lambda = get_number(j["lambda"], "lambda");
  try {
    p.validate();
  } catch (const InputError& e) {
    throw InputError(std::string("problem: ") + e.what());
  }
  return p;
}

inline json to_json(const DRProblem& p) { return {{"A", to_json(p.A)}, {"B", to_json(p.B)}, {"lambda", p.lambda}}; }

/// Header "iter,x1,...,xn,residual"; the residual of iterate 0 is empty.
inline std::string trajectory_csv(const Trajectory& t) {
  std::string out = "iter";
  const std::size_t n = t.points.front().dim();
  for (std::size_t i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  out += ",residual\n";
  for (std::size_t k = 0; k < t.points.size(); ++k) {
    out += std::to_string(k);
    for (std::size_t i = 0; i < n; ++i) out += "," + format_double(t.points[k][i]);
    out += ",";
    if (k > 0) out += format_double(t.residuals[k - 1]);
    out += "\n";
  }
  return out;
}

/// Points and residuals only; status and certificate are not part of the CSV.
inline Trajectory trajectory_from_csv(const std::string& text) {
  const auto lines = csv_lines(text);
  if (lines.empty()) throw InputError("trajectory CSV is empty");
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 3 || header.front() != "iter" || header.back() != "residual")
    throw InputError("trajectory CSV header must be iter,x1,...,xn,residual");
  const std::size_t n = header.size() - 2;
  Trajectory t;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split_csv_line(lines[k]);
    const std::string row = "row " + std::to_string(k);
    if (cells.size() != n + 2) throw InputError("trajectory CSV " + row + " has the wrong number of columns");
    std::vector<double> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(parse_double(cells[i + 1], row));
    t.points.emplace_back(std::move(c));
    if (k > 1) t.residuals.push_back(parse_double(cells.back(), row));
  }
  return t;
}

/// Header "x,y,vx,vy,vnx,vny"; rows in cell order i * ny + j.
inline std::string flow_field_csv(const FlowFieldGrid& g) {
  std::string out = "x,y,vx,vy,vnx,vny\n";
  for (const auto& s : g.samples) {
    out += format_double(s.x) + "," + format_double(s.y) + "," + format_double(s.vx) + "," + format_double(s.vy) +
           "," + format_double(s.vnx) + "," + format_double(s.vny) + "\n";
  }
  return out;
}

/// Samples and resolution (nx = number of distinct x values); the box is not
/// stored in the CSV and is left default.
inline FlowFieldGrid flow_field_from_csv(const std::string& text) {
  const auto lines = csv_lines(text);
  if (lines.empty() || lines[0] != "x,y,vx,vy,vnx,vny") throw InputError("flow field CSV header must be x,y,vx,vy,vnx,vny");
  FlowFieldGrid g;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto c = split_csv_line(lines[k]);
    const std::string row = "row " + std::to_string(k);
    if (c.size() != 6) throw InputError("flow field CSV " + row + " must have 6 columns");
    g.samples.push_back({parse_double(c[0], row), parse_double(c[1], row), parse_double(c[2], row),
                         parse_double(c[3], row), parse_double(c[4], row), parse_double(c[5], row)});
  }
  std::size_t nx = 0;
  for (std::size_t k = 0; k < g.samples.size(); ++k)
    if (k == 0 || g.samples[k].x != g.samples[k - 1].x) ++nx;
  g.nx = nx;
  g.ny = nx ? g.samples.size() / nx : 0;
  return g;
}

/// Header "x,y,label"; label is the attractor id or "nonconvergent".
inline std::string basin_csv(const BasinGrid& g) {
  std::string out = "x,y,label\n";
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) {
      const FloatVec c = cell_center(g.box, g.nx, g.ny, i, j);
      const int l = g.label(i, j);
      out += format_double(c[0]) + "," + format_double(c[1]) + "," +
             (l == kNonconvergent ? std::string("nonconvergent") : std::to_string(l)) + "\n";
    }
  return out;
}

/// Cell centers and labels in file order; kNonconvergent for "nonconvergent".
struct BasinRow {
  double x = 0, y = 0;
  int label = kNonconvergent;
  friend bool operator==(const BasinRow&, const BasinRow&) = default;
};

inline std::vector<BasinRow> basin_from_csv(const std::string& text) {
  const auto lines = csv_lines(text);
  if (lines.empty() || lines[0] != "x,y,label") throw InputError("basin CSV header must be x,y,label");
  std::vector<BasinRow> rows;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto c = split_csv_line(lines[k]);
    const std::string row = "row " + std::to_string(k);
    if (c.size() != 3) throw InputError("basin CSV " + row + " must have 3 columns");
    BasinRow r{parse_double(c[0], row), parse_double(c[1], row), kNonconvergent};
    if (c[2] != "nonconvergent") {
      const double l = parse_double(c[2], row);
      if (l < 0 || l != std::floor(l)) throw InputError("basin CSV " + row + ": label must be an index or nonconvergent");
      r.label = static_cast<int>(l);
    }
    rows.push_back(r);
  }
  return rows;
}

inline json to_json(const Trajectory& t) {
  json j{{"status", to_string(t.status)},
         {"iterations", t.points.size() - 1},
         {"terminal", to_json(t.terminal())},
         {"final_residual", t.residuals.empty() ? 0.0 : t.residuals.back()}};
  if (t.certificate)
    j["certificate"] = {{"shadow", to_json(t.certificate->shadow)},
                        {"residual_A", t.certificate->residual_a},
                        {"residual_B", t.certificate->residual_b}};
  return j;
}

// ---------------------------------------------------------------- dr-transform

inline Family family_from_json(const json& j) {
  const std::size_t dim = get_index(field(j, "dimension"), "dimension");
  if (dim == 0) throw InputError("field 'dimension' must be >= 1");
  const json& polys = field(j, "polytopes");
  if (!polys.is_array() || polys.empty()) throw InputError("field 'polytopes' must be a nonempty array");
  std::vector<RationalPolytope> members;
  for (std::size_t p = 0; p < polys.size(); ++p) {
    const std::string pl = "polytopes[" + std::to_string(p) + "]";
    if (!polys[p].is_array() || polys[p].empty()) throw InputError("field '" + pl + "' must be a nonempty array");
    std::vector<RatVec> pts;
    for (std::size_t v = 0; v < polys[p].size(); ++v) {
      const std::string vl = pl + "[" + std::to_string(v) + "]";
      const json& pt = polys[p][v];
      if (!pt.is_array() || pt.size() != dim)
        throw InputError("field '" + vl + "' must have " + std::to_string(dim) + " coordinates");
      RatVec r;
      for (std::size_t i = 0; i < dim; ++i) r.coords.push_back(rat_from_json(pt[i], vl + "[" + std::to_string(i) + "]"));
      pts.push_back(std::move(r));
    }
    members.push_back(RationalPolytope::hull_of(std::move(pts)));
  }
  return Family(dim, std::move(members));
}

inline json to_json(const Family& f) {
  json polys = json::array();
  for (const auto& p : f.members()) {
    json verts = json::array();
    for (const auto& v : p.vertices()) verts.push_back(to_json(v));
    polys.push_back(std::move(verts));
  }
  return {{"dimension", f.dim()}, {"polytopes", std::move(polys)}};
}

inline json to_json(const CycleReport& r) {
  json orbit = json::array();
  for (const auto& f : r.orbit) orbit.push_back(to_json(f));
  return {{"preperiod", r.preperiod}, {"period", r.period},   {"exact", r.exact},
          {"hashes", r.hashes},       {"orbit", std::move(orbit)}};
}

inline json to_json(const SearchStats& s, const RandomFamilyParams& prm, std::size_t max_steps) {
  json hist = json::object(), pre = json::object();
  for (auto [k, v] : s.period_histogram) hist[std::to_string(k)] = v;
  for (auto [k, v] : s.preperiod_histogram) pre[std::to_string(k)] = v;
  json longp = json::array();
  for (const auto& [trial, rep] : s.long_period)
    longp.push_back({{"trial", trial}, {"family", to_json(rep.orbit.front())}, {"report", to_json(rep)}});
  return {{"params",
           {{"dimension", prm.dim},
            {"members", {prm.min_members, prm.max_members}},
            {"vertices", {prm.min_vertices, prm.max_vertices}},
            {"coord_bound", prm.coord_bound},
            {"seed", prm.seed},
            {"max_steps", max_steps}}},
          {"trials", s.trials},
          {"budget_exhausted", s.budget_exhausted},
          {"replay_failures", s.replay_failures},
          {"period_histogram", std::move(hist)},
          {"preperiod_histogram", std::move(pre)},
          {"long_period_families", std::move(longp)}};
}

// ---------------------------------------------------------------- enclosing-ball

inline PointSet point_set_from_json(const json& j) {
  const std::size_t dim = get_index(field(j, "dimension"), "dimension");
  const json& pts = field(j, "points");
  if (!pts.is_array() || pts.empty()) throw InputError("field 'points' must be a nonempty array");
  PointSet s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string label = "points[" + std::to_string(i) + "]";
    s.points.push_back(float_vec_from_json(pts[i], label));
    if (s.points.back().dim() != dim)
      throw InputError("field '" + label + "' must have " + std::to_string(dim) + " coordinates");
  }
  s.validate();
  return s;
}

inline json to_json(const EnclosingBall& b) { return {{"center", to_json(b.center)}, {"radius", b.radius}}; }

inline EnclosingBall ball_from_json(const json& j) {
  EnclosingBall b{float_vec_from_json(field(j, "center"), "center"), get_number(field(j, "radius"), "radius")};
  if (!(b.radius >= 0)) throw InputError("field 'radius' must be nonnegative");
  return b;
}

// ---------------------------------------------------------------- graph-linkage

inline Graph graph_from_json(const json& j) {
  const std::size_t n = get_index(field(j, "vertices"), "vertices");
  const json& es = field(j, "edges");
  if (!es.is_array()) throw InputError("field 'edges' must be an array");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string label = "edges[" + std::to_string(i) + "]";
    if (!es[i].is_array() || es[i].size() != 2) throw InputError("field '" + label + "' must be a pair [i,j]");
    edges.emplace_back(get_index(es[i][0], label), get_index(es[i][1], label));
  }
  try {
    return Graph(n, edges);
  } catch (const InputError& e) {
    throw InputError(std::string("graph: ") + e.what());
  }
}

inline json to_json(const Graph& g) {
  json es = json::array();
  for (auto [u, v] : g.edges()) es.push_back({u, v});
  return {{"vertices", g.vertex_count()}, {"edges", std::move(es)}};
}

inline json to_json(const Pairing& p) {
  json a = json::array();
  for (auto [s, t] : p.pairs) a.push_back({s, t});
  return a;
}

inline json to_json(const LinkageResult& r, std::size_t k) {
  json j{{"k", k}, {"linked", r.linked}, {"pairings_checked", r.pairings_checked}, {"warnings", r.warnings}};
  j["failing_pairing"] = r.failing_pairing ? to_json(*r.failing_pairing) : json(nullptr);
  if (r.witness_paths) j["witness_paths"] = *r.witness_paths;
  return j;
}

// ---------------------------------------------------------------- unfolding

inline Polytope3 polytope_from_json(const json& j) {
  const json& vs = field(j, "vertices");
  const json& fs = field(j, "faces");
  if (!vs.is_array() || !fs.is_array()) throw InputError("fields 'vertices' and 'faces' must be arrays");
  Polytope3 p;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    p.vertices.push_back(float_vec_from_json(vs[i], "vertices[" + std::to_string(i) + "]"));
    if (p.vertices.back().dim() != 3) throw InputError("field 'vertices[" + std::to_string(i) + "]' must have 3 coordinates");
  }
  for (std::size_t f = 0; f < fs.size(); ++f) {
    const std::string label = "faces[" + std::to_string(f) + "]";
    if (!fs[f].is_array()) throw InputError("field '" + label + "' must be an array of vertex indices");
    std::vector<std::size_t> face;
    for (const auto& v : fs[f]) face.push_back(get_index(v, label));
    p.faces.push_back(std::move(face));
  }
  p.validate();
  return p;
}

inline json to_json(const Polytope3& p) {
  json vs = json::array();
  for (const auto& v : p.vertices) vs.push_back(to_json(v));
  return {{"vertices", std::move(vs)}, {"faces", p.faces}};
}

inline CutTree cut_tree_from_json(const json& j) {
  const json& es = field(j, "foldEdges");
  if (!es.is_array()) throw InputError("field 'foldEdges' must be an array");
  CutTree t;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string label = "foldEdges[" + std::to_string(i) + "]";
    if (!es[i].is_array() || es[i].size() != 2) throw InputError("field '" + label + "' must be a pair [u,v]");
    t.fold_edges.push_back(make_edge(get_index(es[i][0], label), get_index(es[i][1], label)));
  }
  std::sort(t.fold_edges.begin(), t.fold_edges.end());
  return t;
}

inline json to_json(const CutTree& t) {
  json es = json::array();
  for (auto [u, v] : t.fold_edges) es.push_back({u, v});
  return {{"foldEdges", std::move(es)}};
}

inline json to_json(const Net& n, const OverlapReport& r) {
  json faces = json::array();
  for (const auto& pf : n.placed) {
    json poly = json::array();
    for (const auto& q : pf.polygon) poly.push_back(to_json(q));
    faces.push_back({{"face", pf.face}, {"polygon", std::move(poly)}});
  }
  json pairs = json::array();
  for (auto [a, b] : r.pairs) pairs.push_back({a, b});
  return {{"foldEdges", to_json(n.tree)["foldEdges"]},
          {"faces", std::move(faces)},
          {"overlapping", r.overlapping},
          {"overlapping_pairs", std::move(pairs)}};
}

/// Header "face,vertex,x,y"; one row per placed polygon vertex.
inline std::string net_csv(const Net& n) {
  std::string out = "face,vertex,x,y\n";
  for (const auto& pf : n.placed)
    for (std::size_t k = 0; k < pf.polygon.size(); ++k)
      out += std::to_string(pf.face) + "," + std::to_string(k) + "," + format_double(pf.polygon[k][0]) + "," +
             format_double(pf.polygon[k][1]) + "\n";
  return out;
}

inline json to_json(const UnfoldSearchResult& r, const std::string& strategy, std::size_t budget, std::uint64_t seed) {
  json j{{"strategy", strategy},
         {"budget", budget},
         {"seed", seed},
         {"status", r.found ? "found" : "not-found"},
         {"trees_evaluated", r.trees_evaluated},
         {"overlapping", r.overlapping},
         {"nonoverlapping", r.nonoverlapping},
         {"enumeration_complete", r.enumeration_complete}};
  j["first_nonoverlapping_tree"] = r.first_nonoverlapping ? to_json(r.first_nonoverlapping->tree) : json(nullptr);
  j["first_overlapping_tree"] = r.first_overlapping ? to_json(r.first_overlapping->tree) : json(nullptr);
  return j;
}

} // namespace vadu::io
