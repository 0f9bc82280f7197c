#include "chsd/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chsd/assembly.hpp"
#include "chsd/errors.hpp"
#include "chsd/scheme.hpp"

namespace chsd {

std::string to_string(LadderKind kind) { return kind == LadderKind::Temporal ? "temporal" : "spatial"; }

LadderKind parse_ladder_kind(const std::string& name) {
  if (name == "temporal") return LadderKind::Temporal;
  if (name == "spatial") return LadderKind::Spatial;
  throw ValidationError("ladder", "expected temporal or spatial, got '" + name + "'");
}

double fit_slope(const std::vector<double>& sizes, const std::vector<double>& errors) {
  const std::size_t n = sizes.size();
  if (n < 3 || errors.size() != n) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(errors[i] > 1e-10) || !(sizes[i] > 0.0) || !std::isfinite(errors[i])) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    const double x = std::log(sizes[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

void ErrorTable::fit() {
  for (int c = 0; c < ErrorLevel::kColumns; ++c) {
    std::vector<double> sizes, errs;
    for (const ErrorLevel& l : levels) {
      if (l.failed) continue;
      sizes.push_back(kind == LadderKind::Temporal ? l.tau : l.h);
      errs.push_back(l.errors[c]);
    }
    slopes[c] = fit_slope(sizes, errs);
  }
}

std::array<double, ErrorLevel::kColumns> state_errors(const FieldSet& state, const ExactSolution& exact) {
  const KarstMesh& mesh = state.ch.phi.space().mesh();
  const double t = state.time;
  double phi_grad = 0.0, mu_grad = 0.0, u_c = 0.0, u_m = 0.0, sym = 0.0;
  for_each_quadrature_point(mesh, Domain::Whole, 6, [&](const QuadContext& q, double w) {
    const PhaseSample s = exact.phase(q.point, t);
    phi_grad += w * (state.ch.phi.gradient(q.triangle, q.xi) - s.grad_phi).squaredNorm();
    mu_grad += w * (state.ch.mu.gradient(q.triangle, q.xi) - s.grad_mu).squaredNorm();
    if (q.region == Region::Conduit) {
      const FlowSample f = exact.conduit(q.point, t);
      u_c += w * (state.fluid.u_c.vector_value(q.triangle, q.xi) - f.u).squaredNorm();
      const Mat2 g = state.fluid.u_c.vector_gradient(q.triangle, q.xi) - f.grad_u;
      sym += w * (0.5 * (g + g.transpose())).squaredNorm();
    } else {
      const FlowSample f = exact.matrix(q.point, t);
      u_m += w * (state.fluid.u_m.vector_value(q.triangle, q.xi) - f.u).squaredNorm();
    }
  });
  return {std::sqrt(phi_grad), std::sqrt(u_c + u_m), std::sqrt(mu_grad), std::sqrt(sym)};
}

ErrorAccumulator::ErrorAccumulator(std::shared_ptr<const ExactSolution> exact, double tau)
    : exact_(std::move(exact)), tau_(tau) {}

void ErrorAccumulator::observe(const FieldSet& state) {
  const auto e = state_errors(state, *exact_);
  phi_grad_max_ = std::max(phi_grad_max_, e[0]);
  u_max_ = std::max(u_max_, e[1]);
  if (state.step > 0) {
    mu_grad_sum_ += tau_ * e[2] * e[2];
    sym_grad_sum_ += tau_ * e[3] * e[3];
  }
}

std::array<double, ErrorLevel::kColumns> ErrorAccumulator::errors() const {
  return {phi_grad_max_, u_max_, std::sqrt(mu_grad_sum_), std::sqrt(sym_grad_sum_)};
}

RunConfig level_config(const RunConfig& config, const LadderSpec& ladder, int level) {
  RunConfig c = config;
  c.mms = true;
  c.write_vtk = false;
  c.mesh.refinements = 0;
  c.time.snapshot_every = 0;
  double tau = 0.0;
  int cells = 0;
  if (ladder.kind == LadderKind::Temporal) {
    cells = ladder.temporal_cells;
    tau = ladder.coarse_tau / std::pow(2.0, level);
  } else {
    cells = ladder.coarse_cells << level;
    tau = ladder.tau_per_h / cells;
  }
  c.mesh.nx = cells;
  c.mesh.ny = cells;
  c.time.tau = tau;
  c.time.steps = static_cast<int>(std::lround(ladder.final_time / tau));
  c.time.save_every = std::max(1, c.time.steps);
  return c;
}

ErrorTable convergence_study(const RunConfig& config, const LadderSpec& ladder) {
  if (ladder.levels < 1) throw ValidationError("levels", "must be at least 1");
  if (!(ladder.final_time > 0.0)) throw ValidationError("final_time", "must be positive");
  ErrorTable table;
  table.kind = ladder.kind;
  for (int l = 0; l < ladder.levels; ++l) {
    const RunConfig c = level_config(config, ladder, l);
    const auto exact = make_exact_solution(c.mms_family, c.params, c.mesh.split_y);
    ErrorAccumulator acc(exact, c.time.tau);
    ErrorLevel level;
    level.level = l;
    level.h = (c.mesh.bbox.x1 - c.mesh.bbox.x0) / c.mesh.nx;
    level.tau = c.time.tau;
    level.steps = c.time.steps;
    const Trajectory traj = run(c, [&](const FieldSet& state, const StepDiagnostics& d) {
      acc.observe(state);
      level.max_newton_iterations = std::max(level.max_newton_iterations, d.newton_iterations);
      level.max_linear_residual = std::max(level.max_linear_residual, d.linear_residual);
    });
    level.errors = acc.errors();
    level.failed = traj.failed;
    level.failure = traj.failure;
    table.levels.push_back(level);
  }
  table.fit();
  return table;
}

}  // namespace chsd
