#include "chsd/stokes_darcy.hpp"

#include <algorithm>
#include <cmath>

#include "chsd/errors.hpp"

namespace chsd {

FluidLayout FluidLayout::of(const Discretization& disc, bool conduit_multiplier) {
  FluidLayout l;
  l.u_c = 0;
  l.p_c = l.u_c + disc.velocity_c->dof_count();
  l.u_m = l.p_c + disc.pressure_c->dof_count();
  l.p_m = l.u_m + disc.velocity_m->dof_count();
  l.lambda_m = l.p_m + disc.pressure_m->dof_count();
  l.size = l.lambda_m + 1;
  if (conduit_multiplier) l.lambda_c = l.size++;
  return l;
}

std::vector<int> fluid_dirichlet_dofs(const Discretization& disc, const FluidLayout& layout) {
  std::vector<int> dofs;
  const FeSpace& vc = *disc.velocity_c;
  const FeSpace& vm = *disc.velocity_m;
  for (const TaggedEdge& b : disc.mesh->boundary_edges()) {
    if (b.tag == BoundaryTag::GammaC) {
      for (int s : vc.scalar_dofs_on_edge(b.edge)) {
        dofs.push_back(layout.u_c + vc.dof(0, s));
        dofs.push_back(layout.u_c + vc.dof(1, s));
      }
    } else if (b.tag == BoundaryTag::GammaM) {
      int component;
      if (std::abs(std::abs(b.normal.x()) - 1.0) < 1e-12) {
        component = 0;
      } else if (std::abs(std::abs(b.normal.y()) - 1.0) < 1e-12) {
        component = 1;
      } else {
        throw InputError("matrix boundary edge is not axis-aligned");
      }
      for (int s : vm.scalar_dofs_on_edge(b.edge)) dofs.push_back(layout.u_m + vm.dof(component, s));
    }
  }
  std::sort(dofs.begin(), dofs.end());
  dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
  return dofs;
}

namespace {

void add_block(Triplets& t, const SparseMatrix& a, int r0, int c0, double s, bool transpose = false) {
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (transpose) {
        t.emplace_back(r0 + it.col(), c0 + it.row(), s * it.value());
      } else {
        t.emplace_back(r0 + it.row(), c0 + it.col(), s * it.value());
      }
    }
}

void add_vector_source(const FeSpace& space, const std::function<Vec2(const QuadContext&)>& f, Vector& rhs,
                       int offset, LinearKind kind = LinearKind::Source) {
  LinearForm form{kind, {}, {}, kCapillaryDegree};
  form.vector = f;
  assemble_linear(space, form, rhs, offset);
}

}  // namespace

SparseMatrix bjsj_friction_matrix(const Discretization& disc, const FeFunction& phi_prev,
                                  const PhysParams& params) {
  BilinearForm form{BilinearKind::InterfaceTangential, {}, {}, 4};
  const double factor = params.friction_factor();
  form.coefficient = [&](const QuadContext& q) {
    return factor * params.viscosity(phi_prev.value(q.triangle, q.xi));
  };
  return assemble_bilinear(*disc.velocity_c, *disc.velocity_c, form);
}

FluidSolver::FluidSolver(const Discretization& disc, const PhysParams& params) : disc_(disc), params_(params) {
  params_.validate();
  const FeSpace& vc = *disc.velocity_c;
  const FeSpace& vm = *disc.velocity_m;
  const FeSpace& qc = *disc.pressure_c;
  const FeSpace& qm = *disc.pressure_m;
  divergence_c_ = assemble_bilinear(qc, vc, {BilinearKind::Divergence, {}, {}, 4});
  normal_ = assemble_bilinear(vc, qm, {BilinearKind::InterfaceNormal, {}, {}, 4});
  gradient_m_ = assemble_bilinear(vm, qm, {BilinearKind::GradientPairing, {}, {}, 4});
  mass_c_ = assemble_bilinear(vc, vc, {BilinearKind::Mass, {}, {}, 4});
  mass_m_ = assemble_bilinear(vm, vm, {BilinearKind::Mass, {}, {}, 4});
  mean_m_ = assemble_linear(qm, {LinearKind::Source, [](const QuadContext&) { return 1.0; }, {}, 4});
  mean_c_ = assemble_linear(qc, {LinearKind::Source, [](const QuadContext&) { return 1.0; }, {}, 4});
}

void FluidSolver::add_constraint_blocks(Triplets& t, const FluidLayout& l) const {
  // -(div v_c, p_c) and (div u_c, q_c)
  add_block(t, divergence_c_, l.u_c, l.p_c, -1.0, true);
  add_block(t, divergence_c_, l.p_c, l.u_c, 1.0);
  // int p_m v_c . n and -int (u_c . n) q_m
  add_block(t, normal_, l.u_c, l.p_m, 1.0);
  add_block(t, normal_, l.p_m, l.u_c, -1.0, true);
  // (v_m, grad p_m) and -(u_m, grad q_m)
  add_block(t, gradient_m_, l.u_m, l.p_m, 1.0);
  add_block(t, gradient_m_, l.p_m, l.u_m, -1.0, true);
  for (int i = 0; i < mean_m_.size(); ++i) {
    t.emplace_back(l.lambda_m, l.p_m + i, mean_m_[i]);
    t.emplace_back(l.p_m + i, l.lambda_m, mean_m_[i]);
  }
  if (l.lambda_c >= 0) {
    for (int i = 0; i < mean_c_.size(); ++i) {
      t.emplace_back(l.lambda_c, l.p_c + i, mean_c_[i]);
      t.emplace_back(l.p_c + i, l.lambda_c, mean_c_[i]);
    }
  }
}

FluidSystem FluidSolver::assemble(const FeFunction& phi_prev, const FeFunction& mu_next, const FluidState& u_prev,
                                  double tau, const ForcingTerms* forcing, double t_next,
                                  bool conduit_multiplier) const {
  if (!(tau > 0.0)) throw InputError("time step must be positive");
  const FeSpace& vc = *disc_.velocity_c;
  const FeSpace& vm = *disc_.velocity_m;
  if (phi_prev.space_ptr() != disc_.phase || mu_next.space_ptr() != disc_.phase) {
    throw DimensionMismatch("phase fields are not on the discretization's phase space");
  }
  if (u_prev.u_c.coefficients().size() != vc.dof_count() || u_prev.u_m.coefficients().size() != vm.dof_count()) {
    throw DimensionMismatch("previous velocity does not match the velocity spaces");
  }
  FluidSystem sys;
  sys.layout = FluidLayout::of(disc_, conduit_multiplier);
  const FluidLayout& l = sys.layout;
  const PhysParams& p = params_;

  Triplets t;
  add_block(t, mass_c_, l.u_c, l.u_c, p.inertia(Region::Conduit) / tau);
  BilinearForm strain{BilinearKind::SymmetricGradient, {}, {}, 6};
  strain.coefficient = [&](const QuadContext& q) { return 2.0 * p.viscosity(phi_prev.value(q.triangle, q.xi)); };
  assemble_bilinear(vc, vc, strain, t, l.u_c, l.u_c);
  add_block(t, bjsj_friction_matrix(disc_, phi_prev, p), l.u_c, l.u_c, 1.0);

  add_block(t, mass_m_, l.u_m, l.u_m, p.inertia(Region::Matrix) / tau);
  BilinearForm drag{BilinearKind::Mass, {}, {}, 6};
  const Mat2 k_inv = p.permeability_inverse();
  drag.tensor = [&](const QuadContext& q) -> Mat2 {
    return p.viscosity(phi_prev.value(q.triangle, q.xi)) * k_inv;
  };
  assemble_bilinear(vm, vm, drag, t, l.u_m, l.u_m);
  add_constraint_blocks(t, l);
  sys.matrix = from_triplets(l.size, l.size, t);

  sys.rhs = Vector::Zero(l.size);
  sys.rhs.segment(l.u_c, vc.dof_count()) = (p.inertia(Region::Conduit) / tau) * (mass_c_ * u_prev.u_c.coefficients());
  sys.rhs.segment(l.u_m, vm.dof_count()) = (p.inertia(Region::Matrix) / tau) * (mass_m_ * u_prev.u_m.coefficients());
  const auto capillary = [&](const QuadContext& q) -> Vec2 {
    return -phi_prev.value(q.triangle, q.xi) * mu_next.gradient(q.triangle, q.xi);
  };
  add_vector_source(vc, capillary, sys.rhs, l.u_c);
  add_vector_source(vm, capillary, sys.rhs, l.u_m);
  if (forcing) {
    if (forcing->conduit) {
      add_vector_source(vc, [&](const QuadContext& q) { return forcing->conduit(q.point, t_next); }, sys.rhs, l.u_c);
    }
    if (forcing->matrix) {
      add_vector_source(vm, [&](const QuadContext& q) { return forcing->matrix(q.point, t_next); }, sys.rhs, l.u_m);
    }
    if (forcing->interface) {
      add_vector_source(vc, [&](const QuadContext& q) { return forcing->interface(q.point, t_next); }, sys.rhs,
                        l.u_c, LinearKind::InterfaceSource);
    }
  }
  return sys;
}

FluidState FluidSolver::unpack(const Vector& x, const FluidLayout& l) const {
  const Discretization& d = disc_;
  return {FeFunction(d.velocity_c, x.segment(l.u_c, d.velocity_c->dof_count())),
          FeFunction(d.pressure_c, x.segment(l.p_c, d.pressure_c->dof_count())),
          FeFunction(d.velocity_m, x.segment(l.u_m, d.velocity_m->dof_count())),
          FeFunction(d.pressure_m, x.segment(l.p_m, d.pressure_m->dof_count()))};
}

FluidState FluidSolver::solve_system(FluidSystem sys, FluidReport* report, bool reuse) {
  const FluidLayout& l = sys.layout;
  const std::vector<int> fixed = fluid_dirichlet_dofs(disc_, l);
  std::vector<char> is_fixed(l.size, 0);
  for (int d : fixed) is_fixed[d] = 1;
  Triplets t;
  t.reserve(sys.matrix.nonZeros() + fixed.size());
  for (int k = 0; k < sys.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.matrix, k); it; ++it) {
      if (is_fixed[it.row()] || is_fixed[it.col()]) continue;
      t.emplace_back(it.row(), it.col(), it.value());
    }
  for (int d : fixed) {
    t.emplace_back(d, d, 1.0);
    sys.rhs[d] = 0.0;
  }
  const SparseMatrix a = from_triplets(l.size, l.size, t);
  SolveReport rep;
  Vector x;
  if (reuse) {
    x = solver_.solve(a, sys.rhs, &rep);
  } else {
    LinearSolver one_shot;
    one_shot.factorize(a);
    x = one_shot.solve(sys.rhs, &rep);
  }
  if (!x.allFinite()) throw NonFiniteState("fluid solution is not finite");
  if (report) {
    report->solve = rep;
    report->conduit_multiplier = l.lambda_c >= 0;
  }
  return unpack(x, l);
}

FluidState FluidSolver::solve(const FeFunction& phi_prev, const FeFunction& mu_next, const FluidState& u_prev,
                              double tau, const ForcingTerms* forcing, double t_next, FluidReport* report) {
  FluidReport local;
  FluidReport& rep = report ? *report : local;
  rep.mu_checksum = checksum(mu_next.coefficients());
  if (!use_conduit_multiplier_) {
    try {
      return solve_system(assemble(phi_prev, mu_next, u_prev, tau, forcing, t_next, false), &rep, true);
    } catch (const SingularMatrix&) {
      use_conduit_multiplier_ = true;
    }
  }
  try {
    return solve_system(assemble(phi_prev, mu_next, u_prev, tau, forcing, t_next, true), &rep, true);
  } catch (const SingularMatrix& e) {
    throw SingularSystem(std::string("Stokes-Darcy system is singular: ") + e.what());
  }
}

FluidState FluidSolver::project_initial(const std::function<Vec2(const Vec2&)>& u0_c,
                                        const std::function<Vec2(const Vec2&)>& u0_m, FluidReport* report) {
  const FeSpace& vc = *disc_.velocity_c;
  const FeSpace& vm = *disc_.velocity_m;
  const PhysParams& p = params_;
  for (bool with_c : {false, true}) {
    FluidSystem sys;
    sys.layout = FluidLayout::of(disc_, with_c);
    const FluidLayout& l = sys.layout;
    Triplets t;
    add_block(t, mass_c_, l.u_c, l.u_c, p.inertia(Region::Conduit));
    add_block(t, mass_m_, l.u_m, l.u_m, p.inertia(Region::Matrix));
    add_constraint_blocks(t, l);
    sys.matrix = from_triplets(l.size, l.size, t);
    sys.rhs = Vector::Zero(l.size);
    add_vector_source(vc, [&](const QuadContext& q) { return Vec2(p.inertia(Region::Conduit) * u0_c(q.point)); },
                      sys.rhs, l.u_c);
    add_vector_source(vm, [&](const QuadContext& q) { return Vec2(p.inertia(Region::Matrix) * u0_m(q.point)); },
                      sys.rhs, l.u_m);
    try {
      FluidState s = solve_system(std::move(sys), report, false);
      return s;
    } catch (const SingularMatrix& e) {
      if (with_c) throw ProjectionFailed(std::string("initial velocity projection failed: ") + e.what());
    }
  }
  throw ProjectionFailed("initial velocity projection failed");
}

FluidState fluid_solve(const Discretization& disc, const FeFunction& phi_prev, const FeFunction& mu_next,
                       const FluidState& u_prev, const PhysParams& params, double tau,
                       const ForcingTerms* forcing, double t_next, FluidReport* report) {
  FluidSolver solver(disc, params);
  return solver.solve(phi_prev, mu_next, u_prev, tau, forcing, t_next, report);
}

}  // namespace chsd
