#include "chsd/ch_step.hpp"

#include <cmath>

#include "chsd/errors.hpp"

namespace chsd {

Vec2 previous_velocity(const FluidState& u, int triangle, const Vec2& xi) {
  const FeFunction& field = u.u_c.space().contains(triangle) ? u.u_c : u.u_m;
  return field.vector_value(triangle, xi);
}

IntermediateVelocity::IntermediateVelocity(const FluidState& u_prev, const FeFunction& phi_prev,
                                           const FeFunction& mu_next, const PhysParams& params, double tau)
    : u_(u_prev), phi_(phi_prev), mu_(mu_next), params_(params), tau_(tau) {}

Vec2 IntermediateVelocity::operator()(int triangle, const Vec2& xi) const {
  const Region region = phi_.space().mesh().region(triangle);
  const double c = params_.advection_factor(region);
  return previous_velocity(u_, triangle, xi) - tau_ * c * phi_.value(triangle, xi) * mu_.gradient(triangle, xi);
}

Vec2 IntermediateVelocity::at(int triangle, const Vec2& x) const {
  return (*this)(triangle, AffineMap::of(phi_.space().mesh(), triangle).to_reference(x));
}

PhaseOperators PhaseOperators::build(const FeSpace& space) {
  PhaseOperators ops;
  ops.mass = assemble_bilinear(space, space, {BilinearKind::Mass, {}, {}, 4});
  ops.stiffness = assemble_bilinear(space, space, {BilinearKind::Stiffness, {}, {}, 4});
  ops.mass_row = ops.mass * Vector::Ones(space.dof_count());
  return ops;
}

ChSystem::ChSystem(const PhaseOperators& ops, const FeFunction& phi_prev, const FluidState& u_prev,
                   const PhysParams& params, double tau, const ForcingTerms* forcing, double t_next)
    : ops_(ops),
      space_(phi_prev.space_ptr()),
      params_(params),
      tau_(tau),
      n_(phi_prev.space().dof_count()),
      phi_prev_(phi_prev.coefficients()) {
  if (!(tau > 0.0)) throw InputError("time step must be positive");
  if (!phi_prev_.allFinite()) throw NonFiniteState("previous phase field is not finite");
  const FeSpace& y = *space_;

  BilinearForm flux{BilinearKind::Stiffness, {}, {}, kCapillaryDegree};
  flux.coefficient = [&](const QuadContext& q) {
    const double p = phi_prev.value(q.triangle, q.xi);
    return params.mobility(p) + tau * params.advection_factor(q.region) * p * p;
  };
  flux_ = assemble_bilinear(y, y, flux);

  LinearForm advect{LinearKind::GradientSource, {}, {}, kCapillaryDegree};
  advect.vector = [&](const QuadContext& q) {
    return Vec2(phi_prev.value(q.triangle, q.xi) * previous_velocity(u_prev, q.triangle, q.xi));
  };
  rhs1_ = ops.mass * phi_prev_ / tau;
  assemble_linear(y, advect, rhs1_);
  rhs2_ = (params.gamma / params.epsilon) * (ops.mass * phi_prev_);

  if (forcing && forcing->phase) {
    LinearForm f{LinearKind::Source, {}, {}, kNonlinearDegree};
    f.scalar = [&](const QuadContext& q) { return forcing->phase(q.point, t_next); };
    assemble_linear(y, f, rhs1_);
  }
  if (forcing && forcing->potential) {
    LinearForm f{LinearKind::Source, {}, {}, kNonlinearDegree};
    f.scalar = [&](const QuadContext& q) { return forcing->potential(q.point, t_next); };
    assemble_linear(y, f, rhs2_);
  }
}

Vector ChSystem::initial_guess(const Vector& mu_guess) const {
  Vector x(2 * n_);
  x.head(n_) = phi_prev_;
  x.tail(n_) = mu_guess.size() == n_ ? mu_guess : Vector::Zero(n_);
  return x;
}

Vector ChSystem::residual(const Vector& x) const {
  const Vector phi = x.head(n_);
  const Vector mu = x.tail(n_);
  const double ge = params_.gamma / params_.epsilon;
  const double gamma_eps = params_.gamma * params_.epsilon;

  const FeFunction phi_fn(space_, phi);
  LinearForm cubic{LinearKind::Source, {}, {}, kNonlinearDegree};
  cubic.scalar = [&](const QuadContext& q) {
    const double p = phi_fn.value(q.triangle, q.xi);
    return p * p * p;
  };
  const Vector n = assemble_linear(*space_, cubic);

  Vector r(2 * n_);
  r.head(n_) = ops_.mass * phi / tau_ + flux_ * mu - rhs1_;
  r.tail(n_) = ge * n + gamma_eps * (ops_.stiffness * phi) - ops_.mass * mu - rhs2_;
  return r;
}

SparseMatrix ChSystem::jacobian(const Vector& x) const {
  const FeFunction phi_fn(space_, Vector(x.head(n_)));
  const double ge = params_.gamma / params_.epsilon;
  BilinearForm cubic{BilinearKind::Mass, {}, {}, kNonlinearDegree};
  cubic.coefficient = [&](const QuadContext& q) {
    const double p = phi_fn.value(q.triangle, q.xi);
    return 3.0 * ge * p * p;
  };

  Triplets t;
  t.reserve(4 * ops_.mass.nonZeros() + flux_.nonZeros() + ops_.stiffness.nonZeros());
  auto add_block = [&](const SparseMatrix& a, int r0, int c0, double s) {
    for (int k = 0; k < a.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(a, k); it; ++it) t.emplace_back(r0 + it.row(), c0 + it.col(), s * it.value());
  };
  add_block(ops_.mass, 0, 0, 1.0 / tau_);
  add_block(flux_, 0, n_, 1.0);
  assemble_bilinear(*space_, *space_, cubic, t, n_, 0);
  add_block(ops_.stiffness, n_, 0, params_.gamma * params_.epsilon);
  add_block(ops_.mass, n_, n_, -1.0);
  return from_triplets(2 * n_, 2 * n_, t);
}

ChSolver::ChSolver(std::shared_ptr<const FeSpace> space, const PhysParams& params, NewtonOptions options)
    : space_(std::move(space)), params_(params), options_(options), ops_(PhaseOperators::build(*space_)) {}

std::pair<ChState, NewtonReport> ChSolver::solve(const FeFunction& phi_prev, const FeFunction& mu_guess,
                                                 const FluidState& u_prev, double tau,
                                                 const ForcingTerms* forcing, double t_next) const {
  if (phi_prev.space_ptr() != space_) throw MeshMismatch("phase field is not on the solver's space");
  const ChSystem system(ops_, phi_prev, u_prev, params_, tau, forcing, t_next);
  NewtonReport report;
  Vector x = system.initial_guess(mu_guess.coefficients());
  Vector r = system.residual(x);
  double norm = r.lpNorm<Eigen::Infinity>();
  if (!std::isfinite(norm)) throw NonFiniteState("initial Cahn-Hilliard residual is not finite");

  while (norm > options_.tolerance) {
    if (report.iterations >= options_.max_iterations) {
      throw NewtonDiverged("no convergence after " + std::to_string(report.iterations) +
                           " iterations, residual " + std::to_string(norm));
    }
    SolveReport lin;
    const Vector dx = solve_sparse(system.jacobian(x), -r, &lin);
    report.max_linear_residual = std::max(report.max_linear_residual, lin.residual);

    double step = 1.0;
    Vector x_try, r_try;
    double norm_try = 0.0;
    for (int h = 0; h <= options_.max_halvings; ++h) {
      x_try = x + step * dx;
      r_try = system.residual(x_try);
      norm_try = r_try.lpNorm<Eigen::Infinity>();
      if (std::isfinite(norm_try) && norm_try < norm) break;
      step *= 0.5;
    }
    if (!std::isfinite(norm_try)) throw NonFiniteState("Cahn-Hilliard iterate is not finite");
    x = std::move(x_try);
    r = std::move(r_try);
    norm = norm_try;
    ++report.iterations;
  }
  report.residual = norm;
  report.converged = true;

  const int n = space_->dof_count();
  ChState state{FeFunction(space_, Vector(x.head(n))), FeFunction(space_, Vector(x.tail(n)))};
  return {std::move(state), report};
}

std::pair<ChState, NewtonReport> ch_solve(const FeFunction& phi_prev, const FluidState& u_prev,
                                          const PhysParams& params, double tau, const ForcingTerms* forcing,
                                          double t_next) {
  const ChSolver solver(phi_prev.space_ptr(), params);
  return solver.solve(phi_prev, FeFunction(phi_prev.space_ptr()), u_prev, tau, forcing, t_next);
}

}  // namespace chsd
