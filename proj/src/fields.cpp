#include "chsd/fields.hpp"

#include <cstring>

namespace chsd {

Discretization Discretization::build(std::shared_ptr<const KarstMesh> mesh, Family phase_family) {
  Discretization d;
  d.mesh = mesh;
  d.phase = std::make_shared<FeSpace>(mesh, Domain::Whole, phase_family, Arity::Scalar);
  d.velocity_c = std::make_shared<FeSpace>(mesh, Domain::Conduit, Family::P2, Arity::Vector);
  d.pressure_c = std::make_shared<FeSpace>(mesh, Domain::Conduit, Family::P1, Arity::Scalar);
  d.velocity_m = std::make_shared<FeSpace>(mesh, Domain::Matrix, Family::P2, Arity::Vector);
  d.pressure_m = std::make_shared<FeSpace>(mesh, Domain::Matrix, Family::P1, Arity::Scalar);
  return d;
}

FluidState FluidState::zero(const Discretization& disc) {
  return {FeFunction(disc.velocity_c), FeFunction(disc.pressure_c), FeFunction(disc.velocity_m),
          FeFunction(disc.pressure_m)};
}

FieldSet FieldSet::zero(const Discretization& disc) {
  FieldSet s;
  s.ch = {FeFunction(disc.phase), FeFunction(disc.phase)};
  s.fluid = FluidState::zero(disc);
  return s;
}

bool FieldSet::all_finite() const {
  return ch.phi.coefficients().allFinite() && ch.mu.coefficients().allFinite() &&
         fluid.u_c.coefficients().allFinite() && fluid.p_c.coefficients().allFinite() &&
         fluid.u_m.coefficients().allFinite() && fluid.p_m.coefficients().allFinite();
}

std::uint64_t checksum(const Vector& v) {
  std::uint64_t h = 1469598103934665603ull;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::uint64_t bits;
    const double x = v[i];
    std::memcpy(&bits, &x, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace chsd
