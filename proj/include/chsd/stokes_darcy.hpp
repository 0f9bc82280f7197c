#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "chsd/ch_step.hpp"
#include "chsd/fields.hpp"
#include "chsd/forcing.hpp"
#include "chsd/params.hpp"
#include "chsd/sparse.hpp"

namespace chsd {

/// Offsets of the monolithic unknown [u_c | p_c | u_m | p_m | lambda_m (| lambda_c)].
struct FluidLayout {
  int u_c = 0, p_c = 0, u_m = 0, p_m = 0, lambda_m = 0, lambda_c = -1;
  int size = 0;

  static FluidLayout of(const Discretization& disc, bool conduit_multiplier);
};

/// Velocity DOFs fixed to zero: u_c on the outer conduit boundary and the
/// normal component of u_m on the outer matrix boundary. Sorted, in the
/// monolithic numbering.
std::vector<int> fluid_dirichlet_dofs(const Discretization& disc, const FluidLayout& layout);

struct FluidReport {
  SolveReport solve;
  bool conduit_multiplier = false;
  std::uint64_t mu_checksum = 0;
};

/// Assembled system before boundary conditions, for inspection in tests.
struct FluidSystem {
  FluidLayout layout;
  SparseMatrix matrix;
  Vector rhs;
};

/// BJSJ friction alpha nu(phi^k) / sqrt(tr Pi) (u . tau)(v . tau) on the
/// interface, over the conduit velocity space.
SparseMatrix bjsj_friction_matrix(const Discretization& disc, const FeFunction& phi_prev,
                                  const PhysParams& params);

class FluidSolver {
 public:
  FluidSolver(const Discretization& disc, const PhysParams& params);

  /// One step of the coupled Stokes-Darcy problem with capillary force
  /// phi^k grad mu^{k+1}.
  FluidState solve(const FeFunction& phi_prev, const FeFunction& mu_next, const FluidState& u_prev,
                   double tau, const ForcingTerms* forcing = nullptr, double t_next = 0.0,
                   FluidReport* report = nullptr);

  /// L2-type projection of (u0_c, u0_m) onto the discretely divergence-free
  /// velocities: inertia-weighted mass pairing, same constraint blocks.
  FluidState project_initial(const std::function<Vec2(const Vec2&)>& u0_c,
                             const std::function<Vec2(const Vec2&)>& u0_m, FluidReport* report = nullptr);

  FluidSystem assemble(const FeFunction& phi_prev, const FeFunction& mu_next, const FluidState& u_prev,
                       double tau, const ForcingTerms* forcing, double t_next, bool conduit_multiplier) const;

 private:
  FluidState solve_system(FluidSystem system, FluidReport* report, bool reuse);
  void add_constraint_blocks(Triplets& t, const FluidLayout& layout) const;
  FluidState unpack(const Vector& x, const FluidLayout& layout) const;

  const Discretization& disc_;
  PhysParams params_;
  SparseMatrix divergence_c_;  // (div u_c, q_c)
  SparseMatrix normal_;        // int p_m (v_c . n)
  SparseMatrix gradient_m_;    // (v_m, grad p_m)
  SparseMatrix mass_c_, mass_m_;
  Vector mean_m_, mean_c_;
  bool use_conduit_multiplier_ = false;
  LinearSolver solver_;
};

FluidState fluid_solve(const Discretization& disc, const FeFunction& phi_prev, const FeFunction& mu_next,
                       const FluidState& u_prev, const PhysParams& params, double tau,
                       const ForcingTerms* forcing = nullptr, double t_next = 0.0, FluidReport* report = nullptr);

}  // namespace chsd
