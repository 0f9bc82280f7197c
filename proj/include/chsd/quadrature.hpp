#pragma once

#include <vector>

#include "chsd/mesh.hpp"

namespace chsd {

/// Rule on the reference triangle {(0,0),(1,0),(0,1)}. Points are stored as
/// reference coordinates (xi, eta); the barycentric triple is
/// (1 - xi - eta, xi, eta). Weights sum to the reference area 1/2.
struct QuadratureRule {
  int degree = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Symmetric triangle rule exact for total degree 2, 4 or 6.
const QuadratureRule& quadrature(int degree);

/// Rule on [0, 1]: parameters and weights (summing to 1).
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Five-point Gauss-Legendre rule mapped to [0, 1]; exact to degree 9.
const LineRule& gauss_line_rule();

}  // namespace chsd
