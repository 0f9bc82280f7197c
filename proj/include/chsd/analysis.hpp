#pragma once

#include <functional>
#include <memory>

#include "chsd/fields.hpp"
#include "chsd/params.hpp"
#include "chsd/sparse.hpp"

namespace chsd {

/// F(phi) = (phi^2 - 1)^2 / 4.
inline double double_well(double phi) {
  const double s = phi * phi - 1.0;
  return 0.25 * s * s;
}

struct EnergyReport {
  double kinetic_conduit = 0.0;  // rho0/2 ||u_c||^2
  double kinetic_matrix = 0.0;   // rho0/(2 chi) ||u_m||^2
  double interfacial = 0.0;      // gamma int eps/2 |grad phi|^2 + F(phi)/eps
  double total = 0.0;
  double dissipation = 0.0;
};

/// Total energy and its dissipation rate. The double-well integral uses the
/// same rule as the cubic term of the phase solve.
EnergyReport energy(const FieldSet& state, const PhysParams& params);

/// (phi, 1).
double phase_mass(const FeFunction& phi);

/// Mass, stiffness and the mean-constrained Neumann operator of one scalar
/// space, factorized once.
class PhaseOperatorCache {
 public:
  explicit PhaseOperatorCache(std::shared_ptr<const FeSpace> space);

  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const Vector& mass_row() const { return mass_row_; }

  /// Solves M w = b. Throws SingularMass.
  Vector solve_mass(const Vector& b) const;
  /// Solves (grad t, grad xi) = rhs(xi) for all xi with (t, 1) = mean.
  /// `rhs` must annihilate constants up to round-off.
  Vector solve_neumann(const Vector& rhs, double mean) const;

 private:
  std::shared_ptr<const FeSpace> space_;
  SparseMatrix mass_, stiffness_;
  Vector mass_row_;
  LinearSolver mass_solver_;
  LinearSolver neumann_solver_;
};

/// (Delta_h v, xi) = -(grad v, grad xi) for all xi in Y_h.
FeFunction discrete_laplacian(const FeFunction& v);
FeFunction discrete_laplacian(const FeFunction& v, const PhaseOperatorCache& ops);

/// T_h z: mean-zero solution of (grad T_h z, grad xi) = (z, xi). Throws NotMeanZero.
FeFunction inverse_laplacian(const FeFunction& z, const PhaseOperatorCache& ops);
/// ||z||_{-1,h} = ||grad T_h z||.
double neg_one_h_norm(const FeFunction& z);
double neg_one_h_norm(const FeFunction& z, const PhaseOperatorCache& ops);

using ScalarField = std::function<double(const Vec2&)>;
using GradientField = std::function<Vec2(const Vec2&)>;

/// (grad(P f - f), grad v) = 0 for all v, (P f - f, 1) = 0. Throws ProjectionFailed.
FeFunction ritz_project(const ScalarField& f, const GradientField& grad_f, std::shared_ptr<const FeSpace> space);

/// ||v||_inf / (||Delta_h v||^{1/4} ||v||_{L6}^{3/4} + ||v||_{L6}); the sup
/// is taken over DOF values and quadrature points. Throws ZeroField.
double gn_probe(const FeFunction& v);

double l2_norm(const FeFunction& v);
double h1_seminorm(const FeFunction& v);
/// Max over DOF values and degree-6 quadrature points.
double sup_norm(const FeFunction& v);

/// Optional stability diagnostics: ||Delta_h phi||, ||mu||_{H1}, ||grad Delta_h phi||.
struct StabilityQuantities {
  double laplacian_phi = 0.0;
  double mu_h1 = 0.0;
  double grad_laplacian_phi = 0.0;
};
StabilityQuantities stability_quantities(const ChState& ch, const PhaseOperatorCache& ops);

}  // namespace chsd
