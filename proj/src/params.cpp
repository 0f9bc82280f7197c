#include "chsd/params.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "chsd/errors.hpp"

namespace chsd {

std::string to_string(LawKind kind) {
  return kind == LawKind::Constant ? "constant" : "clamped_quadratic";
}

LawKind parse_law_kind(const std::string& text) {
  if (text == "constant") return LawKind::Constant;
  if (text == "clamped_quadratic") return LawKind::ClampedQuadratic;
  throw ValidationError("law", "expected constant or clamped_quadratic, got '" + text + "'");
}

double MaterialLaw::operator()(double phi) const {
  if (kind == LawKind::Constant) return low;
  return low + (high - low) * std::clamp(1.0 - phi * phi, 0.0, 1.0);
}

double MaterialLaw::derivative(double phi) const {
  if (kind == LawKind::Constant) return 0.0;
  const double s = 1.0 - phi * phi;
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return -2.0 * phi * (high - low);
}

namespace {

void require(bool ok, const char* key, const char* constraint) {
  if (!ok) throw ValidationError(key, constraint);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void PhysParams::validate() const {
  require(finite_positive(rho0), "rho0", "must be positive");
  require(finite_positive(chi) && chi <= 1.0, "chi", "porosity must lie in (0, 1]");
  require(finite_positive(gamma), "gamma", "must be positive");
  require(finite_positive(epsilon), "epsilon", "must be positive");
  require(std::isfinite(alpha_bjsj) && alpha_bjsj >= 0.0, "alpha_bjsj", "must be nonnegative");
  require(finite_positive(mobility.low), "mobility_low", "must be positive");
  require(std::isfinite(mobility.high) && mobility.low <= mobility.high, "mobility_high",
          "must be at least mobility_low");
  require(finite_positive(viscosity.low), "viscosity_low", "must be positive");
  require(std::isfinite(viscosity.high) && viscosity.low <= viscosity.high, "viscosity_high",
          "must be at least viscosity_low");
  require(permeability.allFinite(), "permeability", "entries must be finite");
  require(std::abs(permeability(0, 1) - permeability(1, 0)) <= 1e-14 * permeability.norm(), "permeability",
          "must be symmetric");
  const Eigen::SelfAdjointEigenSolver<Mat2> eig(permeability);
  require(eig.eigenvalues().minCoeff() > 0.0, "permeability", "must be positive definite");
}

double PhysParams::friction_factor() const { return alpha_bjsj / std::sqrt(trace_permeability()); }

double PhysParams::advection_factor(Region region) const {
  return region == Region::Conduit ? 1.0 / rho0 : chi / rho0;
}

double PhysParams::inertia(Region region) const {
  return region == Region::Conduit ? rho0 : rho0 / chi;
}

}  // namespace chsd
