#include "chsd/analysis.hpp"

#include <cmath>

#include "chsd/assembly.hpp"
#include "chsd/ch_step.hpp"
#include "chsd/errors.hpp"

namespace chsd {

EnergyReport energy(const FieldSet& state, const PhysParams& params) {
  const FeFunction& phi = state.ch.phi;
  const FeFunction& mu = state.ch.mu;
  const FluidState& f = state.fluid;
  const KarstMesh& mesh = phi.space().mesh();
  const Mat2 k_inv = params.permeability_inverse();
  EnergyReport e;
  double grad_sq = 0.0, well = 0.0, strain = 0.0, drag = 0.0, flux = 0.0;
  for_each_quadrature_point(mesh, Domain::Whole, kNonlinearDegree, [&](const QuadContext& q, double w) {
    const double p = phi.value(q.triangle, q.xi);
    const Vec2 gp = phi.gradient(q.triangle, q.xi);
    const Vec2 gm = mu.gradient(q.triangle, q.xi);
    grad_sq += w * gp.squaredNorm();
    well += w * double_well(p);
    flux += w * params.mobility(p) * gm.squaredNorm();
    const double nu = params.viscosity(p);
    if (q.region == Region::Conduit) {
      const Vec2 u = f.u_c.vector_value(q.triangle, q.xi);
      const Mat2 g = f.u_c.vector_gradient(q.triangle, q.xi);
      const Mat2 d = 0.5 * (g + g.transpose());
      e.kinetic_conduit += w * 0.5 * params.rho0 * u.squaredNorm();
      strain += w * 2.0 * nu * d.squaredNorm();
    } else {
      const Vec2 u = f.u_m.vector_value(q.triangle, q.xi);
      e.kinetic_matrix += w * 0.5 * params.inertia(Region::Matrix) * u.squaredNorm();
      drag += w * nu * u.dot(k_inv * u);
    }
  });
  const double friction = integrate_interface(mesh, [&](const QuadContext& q) {
    const double ut = f.u_c.vector_value(q.triangle, q.xi).dot(q.tangent);
    return params.friction_factor() * params.viscosity(phi.value(q.triangle, q.xi)) * ut * ut;
  });
  e.interfacial = params.gamma * (0.5 * params.epsilon * grad_sq + well / params.epsilon);
  e.total = e.kinetic_conduit + e.kinetic_matrix + e.interfacial;
  e.dissipation = drag + strain + flux + friction;
  return e;
}

double phase_mass(const FeFunction& phi) {
  return integrate(phi.space().mesh(), Domain::Whole,
                   [&](const QuadContext& q) { return phi.value(q.triangle, q.xi); }, 4);
}

PhaseOperatorCache::PhaseOperatorCache(std::shared_ptr<const FeSpace> space) : space_(std::move(space)) {
  const PhaseOperators ops = PhaseOperators::build(*space_);
  mass_ = ops.mass;
  stiffness_ = ops.stiffness;
  mass_row_ = ops.mass_row;
  try {
    mass_solver_.factorize(mass_);
  } catch (const SingularMatrix& e) {
    throw SingularMass(e.what());
  }
  const int n = space_->dof_count();
  Triplets t;
  for (int k = 0; k < stiffness_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(stiffness_, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < n; ++i) {
    t.emplace_back(n, i, mass_row_[i]);
    t.emplace_back(i, n, mass_row_[i]);
  }
  neumann_solver_.factorize(from_triplets(n + 1, n + 1, t));
}

Vector PhaseOperatorCache::solve_mass(const Vector& b) const {
  try {
    return mass_solver_.solve(b);
  } catch (const SingularMatrix& e) {
    throw SingularMass(e.what());
  }
}

Vector PhaseOperatorCache::solve_neumann(const Vector& rhs, double mean) const {
  const int n = space_->dof_count();
  Vector b(n + 1);
  b.head(n) = rhs;
  b[n] = mean;
  return neumann_solver_.solve(b).head(n);
}

FeFunction discrete_laplacian(const FeFunction& v, const PhaseOperatorCache& ops) {
  return FeFunction(v.space_ptr(), ops.solve_mass(-(ops.stiffness() * v.coefficients())));
}

FeFunction discrete_laplacian(const FeFunction& v) {
  const PhaseOperatorCache ops(v.space_ptr());
  return discrete_laplacian(v, ops);
}

FeFunction inverse_laplacian(const FeFunction& z, const PhaseOperatorCache& ops) {
  const double mean = ops.mass_row().dot(z.coefficients());
  if (std::abs(mean) > 1e-10) throw NotMeanZero("(z, 1) = " + std::to_string(mean));
  return FeFunction(z.space_ptr(), ops.solve_neumann(ops.mass() * z.coefficients(), 0.0));
}

double neg_one_h_norm(const FeFunction& z, const PhaseOperatorCache& ops) {
  const Vector t = inverse_laplacian(z, ops).coefficients();
  return std::sqrt(std::max(0.0, t.dot(ops.stiffness() * t)));
}

double neg_one_h_norm(const FeFunction& z) {
  const PhaseOperatorCache ops(z.space_ptr());
  return neg_one_h_norm(z, ops);
}

FeFunction ritz_project(const ScalarField& f, const GradientField& grad_f, std::shared_ptr<const FeSpace> space) {
  try {
    const PhaseOperatorCache ops(space);
    LinearForm load{LinearKind::GradientSource, {}, {}, 6};
    load.vector = [&](const QuadContext& q) { return grad_f(q.point); };
    const Vector rhs = assemble_linear(*space, load);
    const double mean = integrate(space->mesh(), space->domain(), [&](const QuadContext& q) { return f(q.point); }, 6);
    return FeFunction(space, ops.solve_neumann(rhs, mean));
  } catch (const SolverError& e) {
    throw ProjectionFailed(std::string("Ritz projection failed: ") + e.what());
  }
}

double l2_norm(const FeFunction& v) {
  double s = 0.0;
  for_each_quadrature_point(v.space().mesh(), v.space().domain(), 6, [&](const QuadContext& q, double w) {
    for (int c = 0; c < v.space().components(); ++c) {
      const double x = v.value(q.triangle, q.xi, c);
      s += w * x * x;
    }
  });
  return std::sqrt(s);
}

double h1_seminorm(const FeFunction& v) {
  double s = 0.0;
  for_each_quadrature_point(v.space().mesh(), v.space().domain(), 6, [&](const QuadContext& q, double w) {
    for (int c = 0; c < v.space().components(); ++c) s += w * v.gradient(q.triangle, q.xi, c).squaredNorm();
  });
  return std::sqrt(s);
}

double sup_norm(const FeFunction& v) {
  double m = v.coefficients().size() ? v.coefficients().lpNorm<Eigen::Infinity>() : 0.0;
  for_each_quadrature_point(v.space().mesh(), v.space().domain(), 6, [&](const QuadContext& q, double) {
    for (int c = 0; c < v.space().components(); ++c) m = std::max(m, std::abs(v.value(q.triangle, q.xi, c)));
  });
  return m;
}

double gn_probe(const FeFunction& v) {
  double l6 = 0.0;
  for_each_quadrature_point(v.space().mesh(), v.space().domain(), 6, [&](const QuadContext& q, double w) {
    l6 += w * std::pow(v.value(q.triangle, q.xi), 6);
  });
  l6 = std::pow(l6, 1.0 / 6.0);
  if (!(l6 > 0.0)) throw ZeroField("L6 norm vanishes");
  const FeFunction lap = discrete_laplacian(v);
  return sup_norm(v) / (std::pow(l2_norm(lap), 0.25) * std::pow(l6, 0.75) + l6);
}

StabilityQuantities stability_quantities(const ChState& ch, const PhaseOperatorCache& ops) {
  StabilityQuantities s;
  const FeFunction lap = discrete_laplacian(ch.phi, ops);
  const Vector& l = lap.coefficients();
  const Vector& m = ch.mu.coefficients();
  s.laplacian_phi = std::sqrt(std::max(0.0, l.dot(ops.mass() * l)));
  s.mu_h1 = std::sqrt(std::max(0.0, m.dot(ops.mass() * m) + m.dot(ops.stiffness() * m)));
  s.grad_laplacian_phi = std::sqrt(std::max(0.0, l.dot(ops.stiffness() * l)));
  return s;
}

}  // namespace chsd
