#include "chsd/scheme.hpp"

#include <random>

#include "chsd/errors.hpp"

namespace chsd {

Scheme::Scheme(Discretization disc, const PhysParams& params, NewtonOptions newton,
               std::shared_ptr<const ExactSolution> exact)
    : disc_(std::move(disc)),
      params_(params),
      ch_(disc_.phase, params, newton),
      fluid_(disc_, params) {
  if (exact) forcing_ = mms_forcing(std::move(exact), params_);
}

FluidState Scheme::project_velocity(const std::function<Vec2(const Vec2&)>& u_c,
                                    const std::function<Vec2(const Vec2&)>& u_m) {
  last_projection_residual_ = 0.0;
  if (!u_c && !u_m) return FluidState::zero(disc_);
  const auto zero = [](const Vec2&) { return Vec2(Vec2::Zero()); };
  FluidReport report;
  FluidState s = fluid_.project_initial(u_c ? u_c : zero, u_m ? u_m : zero, &report);
  last_projection_residual_ = report.solve.residual;
  // Pressures are Lagrange multipliers of the projection, not physical.
  s.p_c.coefficients().setZero();
  s.p_m.coefficients().setZero();
  return s;
}

FieldSet Scheme::initialize(const InitialData& data) {
  FieldSet s = FieldSet::zero(disc_);
  s.ch.phi = ritz_project(data.phi, data.grad_phi, disc_.phase);
  s.fluid = project_velocity(data.u_c, data.u_m);
  return s;
}

FieldSet Scheme::initialize_nodal(const Vector& phi, const std::function<Vec2(const Vec2&)>& u_c,
                                  const std::function<Vec2(const Vec2&)>& u_m) {
  FieldSet s = FieldSet::zero(disc_);
  s.ch.phi = FeFunction(disc_.phase, phi);
  s.fluid = project_velocity(u_c, u_m);
  return s;
}

StepDiagnostics Scheme::describe(const FieldSet& state) const {
  StepDiagnostics d;
  d.step = state.step;
  d.time = state.time;
  d.energy = energy(state, params_);
  d.mass = phase_mass(state.ch.phi);
  d.linear_residual = last_projection_residual_;
  return d;
}

FieldSet Scheme::step(const FieldSet& state, double tau, StepDiagnostics* diagnostics) {
  if (!state.all_finite()) throw NonFiniteState("state entering the step is not finite");
  const double t_next = (state.step + 1) * tau;
  auto [ch, newton] = ch_.solve(state.ch.phi, state.ch.mu, state.fluid, tau, forcing(), t_next);
  FluidReport fluid_report;
  FluidState fluid = fluid_.solve(state.ch.phi, ch.mu, state.fluid, tau, forcing(), t_next, &fluid_report);

  FieldSet next;
  next.step = state.step + 1;
  next.time = t_next;
  next.ch = std::move(ch);
  next.fluid = std::move(fluid);
  if (!next.all_finite()) throw NonFiniteState("state after step " + std::to_string(next.step) + " is not finite");

  if (diagnostics) {
    StepDiagnostics& d = *diagnostics;
    d = describe(next);
    d.newton_iterations = newton.iterations;
    d.newton_residual = newton.residual;
    d.linear_residual = std::max(newton.max_linear_residual, fluid_report.solve.residual);
    d.ch_mu_checksum = checksum(next.ch.mu.coefficients());
    d.fluid_mu_checksum = fluid_report.mu_checksum;
    d.conduit_multiplier = fluid_report.conduit_multiplier;
  }
  return next;
}

std::shared_ptr<const KarstMesh> build_mesh(const MeshSpec& spec) {
  KarstMesh mesh = build_karst_mesh(spec.nx, spec.ny, spec.split_y, spec.bbox);
  for (int r = 0; r < spec.refinements; ++r) mesh = refine_uniform(mesh);
  return std::make_shared<const KarstMesh>(std::move(mesh));
}

FieldSet initial_state(Scheme& scheme, const RunConfig& config, std::shared_ptr<const ExactSolution> exact) {
  const Discretization& disc = scheme.discretization();
  if (exact) {
    InitialData data;
    data.phi = [exact](const Vec2& x) { return exact->phase(x, 0.0).phi; };
    data.grad_phi = [exact](const Vec2& x) { return exact->phase(x, 0.0).grad_phi; };
    data.u_c = [exact](const Vec2& x) { return exact->conduit(x, 0.0).u; };
    data.u_m = [exact](const Vec2& x) { return exact->matrix(x, 0.0).u; };
    return scheme.initialize(data);
  }
  const int n = disc.phase->dof_count();
  if (config.initial_condition == "spinodal") {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> noise(-config.noise_amplitude, config.noise_amplitude);
    Vector phi(n);
    for (int i = 0; i < n; ++i) phi[i] = config.ic_value + noise(rng);
    return scheme.initialize_nodal(phi);
  }
  const double value = config.initial_condition == "equilibrium" ? 1.0 : config.ic_value;
  return scheme.initialize_nodal(Vector::Constant(n, value));
}

Trajectory run(const RunConfig& config, const StepObserver& observer) {
  config.validate();
  const auto mesh = build_mesh(config.mesh);
  Discretization disc = Discretization::build(mesh, config.phase_family);
  std::shared_ptr<const ExactSolution> exact;
  if (config.mms) exact = make_exact_solution(config.mms_family, config.params, config.mesh.split_y);
  NewtonOptions newton{config.solver.newton_tolerance, config.solver.newton_max_iterations,
                       config.solver.newton_max_halvings};
  Scheme scheme(std::move(disc), config.params, newton, exact);

  Trajectory traj;
  traj.tau = config.time.tau;
  traj.steps = config.time.steps;
  const int K = config.time.steps;
  const int save_every = config.time.save_every;
  const int snap_every = config.time.snapshot_every;

  FieldSet state = initial_state(scheme, config, exact);
  StepDiagnostics d = scheme.describe(state);
  traj.diagnostics.push_back(d);
  if (snap_every > 0) traj.snapshots.push_back(state);
  if (observer) observer(state, d);

  for (int k = 0; k < K; ++k) {
    try {
      state = scheme.step(state, config.time.tau, &d);
    } catch (const SolverError& e) {
      traj.failed = true;
      traj.failed_step = k + 1;
      traj.failure = e.what();
      break;
    }
    if (observer) observer(state, d);
    if (state.step % save_every == 0 || state.step == K) traj.diagnostics.push_back(d);
    if (snap_every > 0 && state.step % snap_every == 0) traj.snapshots.push_back(state);
  }
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace chsd
