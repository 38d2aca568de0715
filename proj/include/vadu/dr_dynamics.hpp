#pragma once

// Douglas-Rachford iteration T = lambda R_B R_A + (1 - lambda) Id, its
// continuous-time limit dx/dt = R_B R_A x - x, and grid sweeps over both.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vadu/errors.hpp"
#include "vadu/float_vec.hpp"
#include "vadu/parallel.hpp"
#include "vadu/projections.hpp"

namespace vadu {

struct DRProblem {
  SetDescriptor A;
  SetDescriptor B;
  double lambda = 0.5;
  Tolerance tol{};

  void validate() const {
    vadu::validate(A);
    vadu::validate(B);
    if (!(lambda > 0 && lambda <= 1)) throw InputError("lambda must lie in (0,1]");
    if (set_dimension(A) != set_dimension(B)) throw InputError("sets A and B have different dimensions");
  }
  std::size_t dim() const { return set_dimension(A); }
};

enum class TrajectoryStatus { converged, budget_exhausted, diverged };

inline const char* to_string(TrajectoryStatus s) {
  switch (s) {
  case TrajectoryStatus::converged: return "converged";
  case TrajectoryStatus::budget_exhausted: return "budget-exhausted";
  case TrajectoryStatus::diverged: return "diverged";
  }
  return "?";
}

/// Shadow P_A(x*) of the terminal point with its distance-to-set residuals.
struct ShadowCertificate {
  FloatVec shadow;
  double residual_a = 0;
  double residual_b = 0;
};

struct Trajectory {
  std::vector<FloatVec> points;
  std::vector<double> residuals; // residuals.size() == points.size() - 1
  TrajectoryStatus status = TrajectoryStatus::budget_exhausted;
  std::optional<ShadowCertificate> certificate;

  const FloatVec& terminal() const { return points.back(); }
};

constexpr double kDivergenceBound = 1e8;

inline FloatVec dr_step(const DRProblem& p, const FloatVec& x) {
  const FloatVec ra = reflect(p.A, x, p.tol);
  const FloatVec rba = reflect(p.B, ra, p.tol);
  return p.lambda * rba + (1 - p.lambda) * x;
}

/// V(x) = R_B R_A x - x, the rescaled limit (T_lambda(x) - x) / lambda as
/// lambda -> 0+.
inline FloatVec flow_vector(const DRProblem& p, const FloatVec& x) {
  return reflect(p.B, reflect(p.A, x, p.tol), p.tol) - x;
}

inline ShadowCertificate make_certificate(const DRProblem& p, const FloatVec& x) {
  ShadowCertificate c{project(p.A, x, p.tol).point, 0, 0};
  c.residual_a = membership_residual(p.A, c.shadow);
  c.residual_b = membership_residual(p.B, c.shadow);
  return c;
}

namespace detail {
inline bool escaped(const FloatVec& x) { return !x.all_finite() || x.norm() > kDivergenceBound; }
} // namespace detail

/// Iterates dr_step until ||x_n - x_{n-1}|| < stop_tol or max_iter steps.
/// Non-finite or escaping iterates end the run with status diverged.
inline Trajectory dr_iterate(const DRProblem& p, const FloatVec& x0, double stop_tol, std::size_t max_iter) {
  if (!(stop_tol > 0)) throw InputError("stopTol must be positive");
  if (max_iter < 1) throw InputError("maxIter must be >= 1");
  require_same_dim(x0, FloatVec(p.dim()), "dr_iterate");
  Trajectory traj;
  traj.points.push_back(x0);
  FloatVec x = x0;
  for (std::size_t n = 0; n < max_iter; ++n) {
    FloatVec next = dr_step(p, x);
    if (detail::escaped(next)) {
      traj.status = TrajectoryStatus::diverged;
      return traj;
    }
    const double r = distance(next, x);
    traj.points.push_back(next);
    traj.residuals.push_back(r);
    x = std::move(next);
    if (r < stop_tol) {
      traj.status = TrajectoryStatus::converged;
      traj.certificate = make_certificate(p, x);
      return traj;
    }
  }
  traj.status = TrajectoryStatus::budget_exhausted;
  return traj;
}

/// Fixed-step classical RK4 on dx/dt = flow_vector(x). Records every step;
/// residuals hold the flow speed ||V|| at each recorded point after the
/// first. Stops early when the speed falls below stop_tol (pass 0 to always
/// integrate to t_max).
inline Trajectory integrate_flow(const DRProblem& p, const FloatVec& x0, double step_size, double t_max,
                                 double stop_tol = 1e-10) {
  if (!(step_size > 0)) throw InputError("stepSize must be positive");
  if (!(t_max > 0)) throw InputError("tMax must be positive");
  require_same_dim(x0, FloatVec(p.dim()), "integrate_flow");
  const auto steps = static_cast<std::size_t>(std::llround(t_max / step_size));
  Trajectory traj;
  traj.points.push_back(x0);
  FloatVec x = x0;
  if (flow_vector(p, x).norm() < stop_tol) {
    traj.status = TrajectoryStatus::converged;
    traj.certificate = make_certificate(p, x);
    return traj;
  }
  const double h = step_size;
  for (std::size_t n = 0; n < steps; ++n) {
    const FloatVec k1 = flow_vector(p, x);
    const FloatVec k2 = flow_vector(p, x + (h / 2) * k1);
    const FloatVec k3 = flow_vector(p, x + (h / 2) * k2);
    const FloatVec k4 = flow_vector(p, x + h * k3);
    FloatVec next = x + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (detail::escaped(next)) {
      traj.status = TrajectoryStatus::diverged;
      return traj;
    }
    x = std::move(next);
    const double speed = flow_vector(p, x).norm();
    traj.points.push_back(x);
    traj.residuals.push_back(speed);
    if (speed < stop_tol) {
      traj.status = TrajectoryStatus::converged;
      traj.certificate = make_certificate(p, x);
      return traj;
    }
  }
  traj.status = TrajectoryStatus::budget_exhausted;
  return traj;
}

struct Box {
  double xmin = -1, xmax = 1, ymin = -1, ymax = 1;

  void validate() const {
    if (!(xmin < xmax && ymin < ymax)) throw InputError("box must satisfy xmin < xmax and ymin < ymax");
  }
};

/// Cell-center sample point of cell (i, j) of an nx x ny grid.
inline FloatVec cell_center(const Box& box, std::size_t nx, std::size_t ny, std::size_t i, std::size_t j) {
  return FloatVec{box.xmin + (static_cast<double>(i) + 0.5) * (box.xmax - box.xmin) / static_cast<double>(nx),
                  box.ymin + (static_cast<double>(j) + 0.5) * (box.ymax - box.ymin) / static_cast<double>(ny)};
}

constexpr int kNonconvergent = -1;

struct BasinGrid {
  Box box;
  std::size_t nx = 0, ny = 0;
  std::vector<int> labels;            // index i * ny + j; kNonconvergent or attractor id
  std::vector<FloatVec> attractors;   // attractor id -> representative shadow

  int label(std::size_t i, std::size_t j) const { return labels[i * ny + j]; }
};

/// Labels each cell start by the attractor its DR run converges to. Runs are
/// independent; clustering happens afterwards in row-major order so labels do
/// not depend on evaluation order.
inline BasinGrid basin_grid(const DRProblem& p, const Box& box, std::size_t nx, std::size_t ny, double stop_tol,
                            std::size_t max_iter, unsigned jobs = 1) {
  box.validate();
  if (nx < 2 || ny < 2) throw InputError("basin resolution must be >= 2 per axis");
  if (p.dim() != 2) throw InputError("basin_grid requires planar sets");
  std::vector<std::optional<FloatVec>> shadows(nx * ny);
  parallel_for(nx * ny, jobs, [&](std::size_t cell) {
    const Trajectory t = dr_iterate(p, cell_center(box, nx, ny, cell / ny, cell % ny), stop_tol, max_iter);
    if (t.status == TrajectoryStatus::converged) shadows[cell] = t.certificate->shadow;
  });

  BasinGrid grid{box, nx, ny, std::vector<int>(nx * ny, kNonconvergent), {}};
  const double radius = 100 * stop_tol;
  for (std::size_t cell = 0; cell < shadows.size(); ++cell) {
    if (!shadows[cell]) continue;
    int best = kNonconvergent;
    double best_d = radius;
    for (std::size_t a = 0; a < grid.attractors.size(); ++a) {
      const double d = distance(grid.attractors[a], *shadows[cell]);
      if (d <= best_d) {
        best_d = d;
        best = static_cast<int>(a);
      }
    }
    if (best == kNonconvergent) {
      best = static_cast<int>(grid.attractors.size());
      grid.attractors.push_back(*shadows[cell]);
    }
    grid.labels[cell] = best;
  }
  return grid;
}

struct FlowSample {
  double x = 0, y = 0;
  double vx = 0, vy = 0;
  double vnx = 0, vny = 0;

  friend bool operator==(const FlowSample&, const FlowSample&) = default;
};

/// Flow field on cell centers; samples[i * ny + j] holds cell (i, j).
struct FlowFieldGrid {
  Box box;
  std::size_t nx = 0, ny = 0;
  std::vector<FlowSample> samples;

  const FlowSample& at(std::size_t i, std::size_t j) const { return samples[i * ny + j]; }
};

inline FlowFieldGrid export_flow_field(const DRProblem& p, const Box& box, std::size_t nx, std::size_t ny,
                                       unsigned jobs = 1) {
  box.validate();
  if (nx < 1 || ny < 1) throw InputError("flow field resolution must be >= 1 per axis");
  if (p.dim() != 2) throw InputError("export_flow_field requires planar sets");
  FlowFieldGrid g{box, nx, ny, std::vector<FlowSample>(nx * ny)};
  parallel_for(nx * ny, jobs, [&](std::size_t cell) {
    const FloatVec c = cell_center(box, nx, ny, cell / ny, cell % ny);
    const FloatVec v = flow_vector(p, c);
    const double n = v.norm();
    FlowSample& s = g.samples[cell];
    s = {c[0], c[1], v[0], v[1], n > 0 ? v[0] / n : 0.0, n > 0 ? v[1] / n : 0.0};
  });
  return g;
}

} // namespace vadu
