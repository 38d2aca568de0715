// vadu: command-line front end for the vadu library.
//
// Exit codes: 0 success, 1 input/validation error, 2 budget exhausted or
// undecided, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vadu/io.hpp"

namespace {

using namespace vadu;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBudget = 2;
constexpr int kExitNumerical = 3;

const char* const kSchemas = R"(Schemas:
  SetDescriptor  {"kind": K, ...} with K and fields
                   line       point:[..], direction:[..]
                   hyperplane normal:[..], offset:c        <n,x> = c
                   halfspace  normal:[..], offset:c        <n,x> <= c
                   sphere     center:[..], radius:r
                   ball       center:[..], radius:r
                   ellipse    a, b                         x^2/a^2 + y^2/b^2 = 1
                   psphere    p                            |x|^p + |y|^p = 1
                   vpolytope  vertices:[[..],..]
  Problem        {"A": SetDescriptor, "B": SetDescriptor, "lambda": 0.5, "x0": [..]}
                   lambda and x0 optional (--lambda / --x0 override)
  Trajectory CSV iter,x1,...,xn,residual      residual empty on row 0
  Flow field CSV x,y,vx,vy,vnx,vny            rows ordered i*ny + j
  Basin CSV      x,y,label                    label = attractor id | nonconvergent
  Family         {"dimension": n, "polytopes": [[["p/q", ...], ...], ...]}
  CycleReport    {"preperiod", "period", "exact", "hashes", "orbit": [Family, ...]}
  PointSet       {"dimension": d, "points": [[...], ...]}
  Ball           {"center": [...], "radius": r}
  Graph          {"vertices": N, "edges": [[i, j], ...]}
  Linkage result {"k", "linked", "pairings_checked", "failing_pairing", "witness_paths", "warnings"}
  Polytope3      {"vertices": [[x, y, z], ...], "faces": [[i, j, k, ...], ...]}  faces CCW from outside
  CutTree        {"foldEdges": [[u, v], ...]}  polytope edges kept as folds
  Net            {"foldEdges", "faces": [{"face", "polygon": [[x, y], ...]}], "overlapping", "overlapping_pairs"}
  Net CSV        face,vertex,x,y

Built-in polytopes: tetrahedron, cube, octahedron, truncated-tetrahedron, truncated-tetrahedron-tall
Seed: --seed, else the VADU_SEED environment variable, else 0.
Exit codes: 0 ok, 1 input error, 2 budget exhausted / undecided, 3 numerical failure.)";

// An output path opened before any work starts, written at the end.
class OutputSlot {
public:
  void open(const std::string& path) {
    if (path.empty()) return;
    path_ = path;
    std::ofstream probe(path, std::ios::binary | std::ios::trunc);
    if (!probe) throw InputError("output '" + path + "' is not writable");
  }
  void write(const std::string& content) const {
    if (path_) io::write_file(*path_, content);
  }
  void write(const json& j) const { write(j.dump(2) + "\n"); }

private:
  std::optional<std::string> path_;
};

std::vector<double> parse_list(const std::string& text, const std::string& option) {
  std::vector<double> out;
  for (auto cell : io::split_csv_line(text)) out.push_back(io::parse_double(cell, option));
  return out;
}

struct Common {
  std::string input;
  std::string output;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("VADU_SEED"); env && *env) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (*end != '\0' || env[0] == '-') throw InputError("VADU_SEED must be a nonnegative integer");
      return v;
    }
    return 0;
  }
};

void add_common(CLI::App* cmd, Common& c, bool needs_input = true) {
  auto* in = cmd->add_option("-i,--input", c.input, "input JSON file");
  if (needs_input) in->required();
  cmd->add_option("-o,--output", c.output, "primary output file");
  cmd->add_option("--seed", c.seed, "random seed (default: VADU_SEED or 0)");
  cmd->add_option("--jobs", c.jobs, "worker threads (0 = all cores)")->default_val(1);
}

std::string fmt_vec(const FloatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) s += (i ? "," : "") + io::format_double(v[i]);
  return s + ")";
}

int trajectory_exit(const Trajectory& t) {
  switch (t.status) {
  case TrajectoryStatus::converged: return kExitOk;
  case TrajectoryStatus::budget_exhausted: return kExitBudget;
  case TrajectoryStatus::diverged: return kExitNumerical;
  }
  return kExitNumerical;
}

struct ProblemInput {
  DRProblem problem;
  std::optional<FloatVec> x0;
};

ProblemInput load_problem(const std::string& path, const std::optional<double>& lambda, const std::string& x0_text) {
  const json j = io::read_json_file(path);
  ProblemInput in{io::problem_from_json(j), std::nullopt};
  if (lambda) {
    in.problem.lambda = *lambda;
    in.problem.validate();
  }
  if (!x0_text.empty())
    in.x0 = FloatVec(parse_list(x0_text, "--x0"));
  else if (j.contains("x0"))
    in.x0 = io::float_vec_from_json(j["x0"], "x0");
  if (in.x0 && in.x0->dim() != in.problem.dim())
    throw InputError("x0 has dimension " + std::to_string(in.x0->dim()) + ", problem has " +
                     std::to_string(in.problem.dim()));
  return in;
}

Box parse_box(const std::string& text) {
  const auto v = parse_list(text, "--box");
  if (v.size() != 4) throw InputError("--box expects xmin,xmax,ymin,ymax");
  Box b{v[0], v[1], v[2], v[3]};
  b.validate();
  return b;
}

std::pair<std::size_t, std::size_t> parse_res(const std::string& text) {
  const auto v = parse_list(text, "--res");
  if (v.empty() || v.size() > 2) throw InputError("--res expects N or NX,NY");
  for (double r : v)
    if (!(r >= 2 && r == std::floor(r) && r <= 1e5)) throw InputError("--res values must be integers in [2, 100000]");
  return {static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v.back())};
}

Polytope3 load_polytope(const std::string& input, const std::string& builtin) {
  if (!input.empty() && !builtin.empty()) throw InputError("use either --input or --builtin, not both");
  if (!builtin.empty()) return builtin_polytope(builtin);
  if (input.empty()) throw InputError("one of --input or --builtin is required");
  return io::polytope_from_json(io::read_json_file(input));
}

int run_app(int argc, char** argv) {
  CLI::App app{"vadu: projection-algorithm dynamics, polytope-family transforms, enclosing balls, graph linkage "
               "and polytope unfoldings"};
  app.footer(kSchemas);
  app.require_subcommand(1);
  std::function<int()> action;

  // dr-iterate
  Common it_c;
  std::optional<double> it_lambda;
  std::string it_x0, it_report;
  double it_stop = 1e-10;
  std::size_t it_max = 10000;
  auto* it = app.add_subcommand("dr-iterate", "Douglas-Rachford iteration from x0 (Problem JSON -> Trajectory CSV)");
  add_common(it, it_c);
  it->add_option("--lambda", it_lambda, "averaging parameter in (0,1]");
  it->add_option("--x0", it_x0, "start point, comma separated");
  it->add_option("--stop-tol", it_stop, "stop when ||x_{k+1} - x_k|| falls below this")->capture_default_str();
  it->add_option("--max-iter", it_max, "iteration budget")->capture_default_str();
  it->add_option("--report", it_report, "JSON summary with shadow certificate");
  it->callback([&] {
    action = [&] {
      const std::uint64_t seed = it_c.resolved_seed();
      auto in = load_problem(it_c.input, it_lambda, it_x0);
      if (!in.x0) throw InputError("missing field 'x0' (or --x0)");
      OutputSlot out, rep;
      out.open(it_c.output);
      rep.open(it_report);
      const Trajectory t = dr_iterate(in.problem, *in.x0, it_stop, it_max);
      out.write(io::trajectory_csv(t));
      rep.write(io::to_json(t));
      std::cout << "dr-iterate status=" << to_string(t.status) << " iterations=" << t.points.size() - 1
                << " residual=" << io::format_double(t.residuals.empty() ? 0.0 : t.residuals.back())
                << " terminal=" << fmt_vec(t.terminal());
      if (t.certificate) std::cout << " shadow=" << fmt_vec(t.certificate->shadow);
      std::cout << " seed=" << seed << "\n";
      return trajectory_exit(t);
    };
  });

  // dr-flow
  Common fl_c;
  std::optional<double> fl_lambda;
  std::string fl_x0, fl_field, fl_box = "-3,3,-3,3", fl_res = "21";
  double fl_step = 0.01, fl_tmax = 100, fl_stop = 1e-10;
  auto* fl = app.add_subcommand("dr-flow", "RK4 integration of the continuous-time flow (Problem JSON -> Trajectory CSV)");
  add_common(fl, fl_c);
  fl->add_option("--lambda", fl_lambda, "averaging parameter in (0,1]");
  fl->add_option("--x0", fl_x0, "start point, comma separated");
  fl->add_option("--step", fl_step, "RK4 step size")->capture_default_str();
  fl->add_option("--tmax", fl_tmax, "integration horizon")->capture_default_str();
  fl->add_option("--stop-tol", fl_stop, "stop when ||V(x)|| falls below this (0 disables)")->capture_default_str();
  fl->add_option("--field", fl_field, "also write the flow field CSV over --box at --res");
  fl->add_option("--box", fl_box, "xmin,xmax,ymin,ymax")->capture_default_str();
  fl->add_option("--res", fl_res, "N or NX,NY")->capture_default_str();
  fl->callback([&] {
    action = [&] {
      const std::uint64_t seed = fl_c.resolved_seed();
      auto in = load_problem(fl_c.input, fl_lambda, fl_x0);
      if (!in.x0 && fl_field.empty()) throw InputError("missing field 'x0' (or --x0); or request --field only");
      OutputSlot out, field;
      out.open(fl_c.output);
      field.open(fl_field);
      std::size_t field_cells = 0;
      if (!fl_field.empty()) {
        const auto [nx, ny] = parse_res(fl_res);
        const FlowFieldGrid g = export_flow_field(in.problem, parse_box(fl_box), nx, ny, fl_c.jobs);
        field.write(io::flow_field_csv(g));
        field_cells = g.samples.size();
      }
      if (!in.x0) {
        std::cout << "dr-flow field_cells=" << field_cells << " seed=" << seed << "\n";
        return kExitOk;
      }
      const Trajectory t = integrate_flow(in.problem, *in.x0, fl_step, fl_tmax, fl_stop);
      out.write(io::trajectory_csv(t));
      std::cout << "dr-flow status=" << to_string(t.status) << " steps=" << t.points.size() - 1
                << " speed=" << io::format_double(t.residuals.empty() ? 0.0 : t.residuals.back())
                << " terminal=" << fmt_vec(t.terminal());
      if (field_cells) std::cout << " field_cells=" << field_cells;
      std::cout << " seed=" << seed << "\n";
      return trajectory_exit(t);
    };
  });

  // dr-basin
  Common ba_c;
  std::optional<double> ba_lambda;
  std::string ba_box = "-3,3,-3,3", ba_res = "100";
  double ba_stop = 1e-10;
  std::size_t ba_max = 10000;
  auto* ba = app.add_subcommand("dr-basin", "Label grid starts by attractor (Problem JSON -> Basin CSV)");
  add_common(ba, ba_c);
  ba->add_option("--lambda", ba_lambda, "averaging parameter in (0,1]");
  ba->add_option("--box", ba_box, "xmin,xmax,ymin,ymax")->capture_default_str();
  ba->add_option("--res", ba_res, "N or NX,NY")->capture_default_str();
  ba->add_option("--stop-tol", ba_stop, "per-run stop tolerance")->capture_default_str();
  ba->add_option("--max-iter", ba_max, "per-run iteration budget")->capture_default_str();
  ba->callback([&] {
    action = [&] {
      const std::uint64_t seed = ba_c.resolved_seed();
      auto in = load_problem(ba_c.input, ba_lambda, "");
      const Box box = parse_box(ba_box);
      const auto [nx, ny] = parse_res(ba_res);
      OutputSlot out;
      out.open(ba_c.output);
      const BasinGrid g = basin_grid(in.problem, box, nx, ny, ba_stop, ba_max, ba_c.jobs);
      out.write(io::basin_csv(g));
      const auto nonconv = std::count(g.labels.begin(), g.labels.end(), kNonconvergent);
      std::cout << "dr-basin cells=" << g.labels.size() << " attractors=" << g.attractors.size()
                << " nonconvergent=" << nonconv << " seed=" << seed << "\n";
      return kExitOk;
    };
  });

  // drt-cycle
  Common cy_c;
  std::size_t cy_steps = 1000, cy_samples = 4096;
  std::string cy_mode = "exact";
  auto* cy = app.add_subcommand("drt-cycle", "Iterate the family transform until a repeat (Family JSON -> CycleReport JSON)");
  add_common(cy, cy_c);
  cy->add_option("--max-steps", cy_steps, "transform step budget")->capture_default_str();
  cy->add_option("--mode", cy_mode, "exact (dimension <= 2) or sampled")
      ->check(CLI::IsMember({"exact", "sampled"}))
      ->capture_default_str();
  cy->add_option("--samples", cy_samples, "directions per step in sampled mode")->capture_default_str();
  cy->callback([&] {
    action = [&] {
      const std::uint64_t seed = cy_c.resolved_seed();
      const Family f = io::family_from_json(io::read_json_file(cy_c.input));
      OutputSlot out;
      out.open(cy_c.output);
      TransformOptions opt;
      opt.mode = cy_mode == "exact" ? DirectionMode::exact : DirectionMode::sampled;
      opt.samples = cy_samples;
      opt.seed = seed;
      try {
        const CycleReport r = detect_cycle(f, cy_steps, opt);
        out.write(io::to_json(r));
        std::cout << "drt-cycle preperiod=" << r.preperiod << " period=" << r.period
                  << " exact=" << (r.exact ? "true" : "false") << " hash=" << r.hashes[r.preperiod]
                  << " seed=" << seed << "\n";
        return kExitOk;
      } catch (const CycleBudgetError& e) {
        json partial = json::array();
        for (const auto& g : e.partial_orbit()) partial.push_back(io::to_json(g));
        out.write(json{{"status", "budget-exhausted"}, {"orbit", std::move(partial)}});
        std::cout << "drt-cycle status=budget-exhausted steps=" << cy_steps << " seed=" << seed << "\n";
        return kExitBudget;
      }
    };
  });

  // drt-search
  Common se_c;
  RandomFamilyParams se_p;
  std::size_t se_trials = 100, se_steps = 1000;
  auto* se = app.add_subcommand("drt-search", "Random families: period statistics (-> search JSON)");
  add_common(se, se_c, false);
  se->add_option("--trials", se_trials, "number of random families")->capture_default_str();
  se->add_option("--max-steps", se_steps, "transform step budget per family")->capture_default_str();
  se->add_option("--dim", se_p.dim, "dimension (>2 uses sampled directions)")->capture_default_str();
  se->add_option("--min-members", se_p.min_members)->capture_default_str();
  se->add_option("--max-members", se_p.max_members)->capture_default_str();
  se->add_option("--min-vertices", se_p.min_vertices)->capture_default_str();
  se->add_option("--max-vertices", se_p.max_vertices)->capture_default_str();
  se->add_option("--coord-bound", se_p.coord_bound, "integer coordinates in [-b, b]")->capture_default_str();
  se->callback([&] {
    action = [&] {
      se_p.seed = se_c.resolved_seed();
      se_p.validate();
      OutputSlot out;
      out.open(se_c.output);
      const SearchStats s = random_family_search(se_p, se_trials, se_steps, se_c.jobs);
      out.write(io::to_json(s, se_p, se_steps));
      std::cout << "drt-search trials=" << s.trials << " periods={";
      bool first = true;
      for (auto [k, v] : s.period_histogram) {
        std::cout << (first ? "" : ",") << k << ":" << v;
        first = false;
      }
      std::cout << "} long_period=" << s.long_period.size() << " budget_exhausted=" << s.budget_exhausted
                << " replay_failures=" << s.replay_failures << " seed=" << se_p.seed << "\n";
      return s.replay_failures ? kExitNumerical : kExitOk;
    };
  });

  // meb
  Common mb_c;
  auto* mb = app.add_subcommand("meb", "Minimal enclosing ball (PointSet JSON -> Ball JSON)");
  add_common(mb, mb_c);
  mb->callback([&] {
    action = [&] {
      const std::uint64_t seed = mb_c.resolved_seed();
      const PointSet s = io::point_set_from_json(io::read_json_file(mb_c.input));
      OutputSlot out;
      out.open(mb_c.output);
      const EnclosingBall b = solve_meb(s, seed);
      const bool cert = hull_certificate(s, b);
      json j = io::to_json(b);
      j["certificate"] = cert;
      out.write(j);
      std::cout << "meb center=" << fmt_vec(b.center) << " radius=" << io::format_double(b.radius)
                << " certificate=" << (cert ? "pass" : "fail") << " seed=" << seed << "\n";
      return cert ? kExitOk : kExitNumerical;
    };
  });

  // klinked
  Common kl_c;
  std::size_t kl_k = 1;
  std::uint64_t kl_budget = kDefaultNodeBudget;
  auto* kl = app.add_subcommand("klinked", "Decide k-linkedness (Graph JSON -> linkage result JSON)");
  add_common(kl, kl_c);
  kl->add_option("--k", kl_k, "number of terminal pairs")->required();
  kl->add_option("--budget", kl_budget, "backtracking node budget per pairing")->capture_default_str();
  kl->callback([&] {
    action = [&] {
      const std::uint64_t seed = kl_c.resolved_seed();
      const Graph g = io::graph_from_json(io::read_json_file(kl_c.input));
      OutputSlot out;
      out.open(kl_c.output);
      LinkageOptions opt;
      opt.node_budget = kl_budget;
      opt.jobs = kl_c.jobs;
      try {
        LinkageResult r = is_k_linked(g, kl_k, opt);
        if (r.failing_pairing) r.witness_paths.reset();
        out.write(io::to_json(r, kl_k));
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << "klinked k=" << kl_k << " linked=" << (r.linked ? "true" : "false")
                  << " pairings=" << r.pairings_checked;
        if (r.failing_pairing) {
          std::cout << " failing=";
          for (auto [s, t] : r.failing_pairing->pairs) std::cout << "(" << s << "," << t << ")";
        }
        std::cout << " seed=" << seed << "\n";
        return kExitOk;
      } catch (const BudgetError& e) {
        out.write(json{{"k", kl_k}, {"status", "undecided"}, {"reason", e.what()}});
        std::cout << "klinked k=" << kl_k << " status=undecided seed=" << seed << "\n";
        return kExitBudget;
      }
    };
  });

  // unfold
  Common un_c;
  std::string un_builtin, un_tree, un_csv;
  auto* un = app.add_subcommand("unfold", "Unfold along a cut tree (Polytope3 JSON + CutTree JSON -> Net JSON)");
  add_common(un, un_c, false);
  un->add_option("--builtin", un_builtin, "built-in polytope name");
  un->add_option("--tree", un_tree, "CutTree JSON (default: random spanning tree from --seed)");
  un->add_option("--csv", un_csv, "placed polygons as CSV");
  un->callback([&] {
    action = [&] {
      const std::uint64_t seed = un_c.resolved_seed();
      const Polytope3 p = load_polytope(un_c.input, un_builtin);
      CutTree t;
      if (!un_tree.empty()) {
        t = io::cut_tree_from_json(io::read_json_file(un_tree));
      } else {
        std::mt19937_64 rng(seed);
        t = random_spanning_tree(p, rng);
      }
      OutputSlot out, csv;
      out.open(un_c.output);
      csv.open(un_csv);
      const Net n = unfold(p, t);
      const OverlapReport r = check_overlap(n);
      out.write(io::to_json(n, r));
      csv.write(io::net_csv(n));
      std::cout << "unfold faces=" << n.placed.size() << " overlapping=" << (r.overlapping ? "true" : "false")
                << " overlapping_pairs=" << r.pairs.size() << " seed=" << seed << "\n";
      return kExitOk;
    };
  });

  // unfold-search
  Common us_c;
  std::string us_builtin, us_strategy = "random", us_csv;
  std::size_t us_budget = 500;
  auto* us = app.add_subcommand("unfold-search", "Search cut trees for a non-overlapping net (-> search JSON)");
  add_common(us, us_c, false);
  us->add_option("--builtin", us_builtin, "built-in polytope name");
  us->add_option("--strategy", us_strategy, "exhaustive or random")
      ->check(CLI::IsMember({"exhaustive", "random"}))
      ->capture_default_str();
  us->add_option("--budget", us_budget, "number of cut trees to evaluate")->capture_default_str();
  us->add_option("--csv", us_csv, "first non-overlapping net as CSV");
  us->callback([&] {
    action = [&] {
      const std::uint64_t seed = us_c.resolved_seed();
      const Polytope3 p = load_polytope(us_c.input, us_builtin);
      OutputSlot out, csv;
      out.open(us_c.output);
      csv.open(us_csv);
      const auto strategy = us_strategy == "exhaustive" ? SearchStrategy::exhaustive : SearchStrategy::random;
      const UnfoldSearchResult r = search_nonoverlapping(p, strategy, us_budget, seed, us_c.jobs);
      out.write(io::to_json(r, us_strategy, us_budget, seed));
      if (r.first_nonoverlapping) csv.write(io::net_csv(*r.first_nonoverlapping));
      std::cout << "unfold-search strategy=" << us_strategy << " status=" << (r.found ? "found" : "not-found")
                << " evaluated=" << r.trees_evaluated << " overlapping=" << r.overlapping
                << " nonoverlapping=" << r.nonoverlapping << " seed=" << seed << "\n";
      if (r.found || r.enumeration_complete) return kExitOk;
      return kExitBudget;
    };
  });

  for (auto* sub : app.get_subcommands({})) sub->footer(kSchemas);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  return action();
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const vadu::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const vadu::BudgetError& e) {
    std::cerr << "undecided: " << e.what() << "\n";
    return kExitBudget;
  } catch (const vadu::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
