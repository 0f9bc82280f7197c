#pragma once

#include <string>

#include "chsd/mesh.hpp"

namespace chsd {

enum class LawKind { Constant, ClampedQuadratic };

std::string to_string(LawKind kind);
LawKind parse_law_kind(const std::string& text);

/// Phase-dependent coefficient bounded between `low` and `high`.
///
/// Constant: value(phi) = low.
/// ClampedQuadratic: value(phi) = low + (high - low) * clamp(1 - phi^2, 0, 1).
struct MaterialLaw {
  LawKind kind = LawKind::Constant;
  double low = 1.0;
  double high = 1.0;

  double operator()(double phi) const;
  double derivative(double phi) const;
  bool is_constant() const { return kind == LawKind::Constant || low == high; }
};

struct PhysParams {
  double rho0 = 1.0;
  double chi = 0.5;
  double gamma = 1.0;
  double epsilon = 0.05;
  double alpha_bjsj = 1.0;
  Mat2 permeability = Mat2::Identity();
  MaterialLaw mobility{LawKind::Constant, 0.01, 0.01};
  MaterialLaw viscosity{LawKind::Constant, 1.0, 1.0};

  /// Throws ValidationError naming the offending parameter.
  void validate() const;

  Mat2 permeability_inverse() const { return permeability.inverse(); }
  double trace_permeability() const { return permeability.trace(); }
  /// alpha_bjsj / sqrt(tr Pi); multiplied by nu gives the friction weight.
  double friction_factor() const;
  /// Factor c of the intermediate velocity: 1/rho0 in the conduit, chi/rho0 in the matrix.
  double advection_factor(Region region) const;
  /// Mass weight of the velocity time derivative: rho0 or rho0/chi.
  double inertia(Region region) const;
};

}  // namespace chsd
