#pragma once

#include <utility>

#include "chsd/assembly.hpp"
#include "chsd/fields.hpp"
#include "chsd/forcing.hpp"
#include "chsd/params.hpp"
#include "chsd/sparse.hpp"

namespace chsd {

/// Quadrature degree shared by every term built from the capillary force
/// phi^k grad mu^{k+1}, so that the discrete energy identity is exact.
constexpr int kCapillaryDegree = 6;
/// Degree for the cubic term and the double-well energy.
constexpr int kNonlinearDegree = 6;

/// u_bar = u^k - tau * c * phi^k grad mu^{k+1}, with c = 1/rho0 in the
/// conduit and chi/rho0 in the matrix. Evaluated pointwise.
class IntermediateVelocity {
 public:
  IntermediateVelocity(const FluidState& u_prev, const FeFunction& phi_prev, const FeFunction& mu_next,
                       const PhysParams& params, double tau);
  Vec2 operator()(int triangle, const Vec2& xi) const;
  Vec2 at(int triangle, const Vec2& x) const;

 private:
  const FluidState& u_;
  const FeFunction& phi_;
  const FeFunction& mu_;
  const PhysParams& params_;
  double tau_;
};

/// u^k on whichever subdomain contains the triangle.
Vec2 previous_velocity(const FluidState& u, int triangle, const Vec2& xi);

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
  int max_halvings = 8;
};

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double max_linear_residual = 0.0;
};

/// Fixed per-mesh matrices of Y_h.
struct PhaseOperators {
  SparseMatrix mass;
  SparseMatrix stiffness;
  Vector mass_row;  // (1, v_i)

  static PhaseOperators build(const FeSpace& space);
};

/// Nonlinear system of one Cahn-Hilliard step in x = [phi; mu]:
///   R1 = M(phi - phi^k)/tau + (K_mob + K_bar) mu - a - F1
///   R2 = (gamma/eps) N(phi) - (gamma/eps) M phi^k + gamma eps K phi - M mu - F2
/// where K_mob has coefficient M(phi^k), K_bar has tau c (phi^k)^2,
/// a_i = (u^k phi^k, grad v_i) and N(phi)_i = (phi^3, v_i).
class ChSystem {
 public:
  ChSystem(const PhaseOperators& ops, const FeFunction& phi_prev, const FluidState& u_prev,
           const PhysParams& params, double tau, const ForcingTerms* forcing = nullptr, double t_next = 0.0);

  int size() const { return 2 * n_; }
  Vector residual(const Vector& x) const;
  SparseMatrix jacobian(const Vector& x) const;
  Vector initial_guess(const Vector& mu_guess) const;

 private:
  const PhaseOperators& ops_;
  std::shared_ptr<const FeSpace> space_;
  const PhysParams& params_;
  double tau_;
  int n_;
  Vector phi_prev_;
  SparseMatrix flux_;   // K_mob + K_bar
  Vector rhs1_;         // M phi^k / tau + a + F1
  Vector rhs2_;         // (gamma/eps) M phi^k + F2
};

/// Newton iteration with step halving on residual increase. Throws
/// NewtonDiverged or NonFiniteState.
class ChSolver {
 public:
  ChSolver(std::shared_ptr<const FeSpace> space, const PhysParams& params, NewtonOptions options = {});

  std::pair<ChState, NewtonReport> solve(const FeFunction& phi_prev, const FeFunction& mu_guess,
                                         const FluidState& u_prev, double tau,
                                         const ForcingTerms* forcing = nullptr, double t_next = 0.0) const;
  const PhaseOperators& operators() const { return ops_; }

 private:
  std::shared_ptr<const FeSpace> space_;
  PhysParams params_;
  NewtonOptions options_;
  PhaseOperators ops_;
};

/// One-shot convenience wrapper; mu starts from zero.
std::pair<ChState, NewtonReport> ch_solve(const FeFunction& phi_prev, const FluidState& u_prev,
                                          const PhysParams& params, double tau,
                                          const ForcingTerms* forcing = nullptr, double t_next = 0.0);

}  // namespace chsd
