#pragma once

#include <functional>

#include "chsd/mesh.hpp"

namespace chsd {

/// Extra source terms for manufactured-solution runs. Every member may be
/// empty, meaning zero. All are evaluated at the new time level t^{k+1}.
struct ForcingTerms {
  using Scalar = std::function<double(const Vec2&, double)>;
  using Field = std::function<Vec2(const Vec2&, double)>;

  Scalar phase;      // paired with v in the phase equation
  Scalar potential;  // paired with the test function of the potential equation
  Field conduit;     // body force in the conduit momentum equation
  Field matrix;      // body force in the Darcy equation
  Field interface;   // traction on the interface, paired with v_c

  bool empty() const { return !phase && !potential && !conduit && !matrix && !interface; }
};

}  // namespace chsd
