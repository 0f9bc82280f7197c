#pragma once

#include <cstdint>
#include <memory>

#include "chsd/fe_space.hpp"

namespace chsd {

/// The six spaces of the scheme on one mesh: Y_h on the whole domain and a
/// Taylor-Hood pair (P2 velocity, P1 pressure) on each subdomain.
struct Discretization {
  std::shared_ptr<const KarstMesh> mesh;
  std::shared_ptr<const FeSpace> phase;
  std::shared_ptr<const FeSpace> velocity_c;
  std::shared_ptr<const FeSpace> pressure_c;
  std::shared_ptr<const FeSpace> velocity_m;
  std::shared_ptr<const FeSpace> pressure_m;

  static Discretization build(std::shared_ptr<const KarstMesh> mesh, Family phase_family = Family::P1);
};

struct ChState {
  FeFunction phi;
  FeFunction mu;
};

struct FluidState {
  FeFunction u_c;
  FeFunction p_c;
  FeFunction u_m;
  FeFunction p_m;

  static FluidState zero(const Discretization& disc);
};

/// Discrete state at one time level.
struct FieldSet {
  int step = 0;
  double time = 0.0;
  ChState ch;
  FluidState fluid;

  static FieldSet zero(const Discretization& disc);
  bool all_finite() const;
};

/// Order-sensitive FNV-1a hash of the coefficient bytes.
std::uint64_t checksum(const Vector& v);

}  // namespace chsd
