#pragma once

#include <functional>
#include <optional>

#include "chsd/fe_space.hpp"
#include "chsd/sparse.hpp"

namespace chsd {

/// Where a coefficient is being evaluated. `xi` is the reference coordinate
/// inside `triangle`; for interface integrals `edge` is the interface-edge
/// index and `normal`/`tangent` are n_cm and tau_1.
struct QuadContext {
  int triangle = -1;
  Vec2 xi = Vec2::Zero();
  Vec2 point = Vec2::Zero();
  Region region = Region::Conduit;
  int edge = -1;
  Vec2 normal = Vec2::Zero();
  Vec2 tangent = Vec2::Zero();
};

using ScalarCoefficient = std::function<double(const QuadContext&)>;
using VectorCoefficient = std::function<Vec2(const QuadContext&)>;
using TensorCoefficient = std::function<Mat2(const QuadContext&)>;

enum class BilinearKind {
  Mass,                 // c u v, or v . K u for vector spaces with a tensor
  Stiffness,            // c grad u . grad v (componentwise for vectors)
  SymmetricGradient,    // c D(u) : D(v), vector spaces
  Divergence,           // c (div u) q, vector trial, scalar test
  GradientPairing,      // c v . grad p, vector test, scalar trial
  InterfaceTangential,  // c (u . tau)(v . tau) on the interface
  InterfaceNormal,      // c (w . n) s on the interface, one vector and one scalar space
};

struct BilinearForm {
  BilinearKind kind = BilinearKind::Mass;
  ScalarCoefficient coefficient;  // empty means 1
  TensorCoefficient tensor;       // Mass on vector spaces only
  int degree = 4;
};

/// Appends scale * A(test, trial) to `out`, shifted by the given offsets.
void assemble_bilinear(const FeSpace& test, const FeSpace& trial, const BilinearForm& form,
                       Triplets& out, int row_offset = 0, int col_offset = 0, double scale = 1.0);
SparseMatrix assemble_bilinear(const FeSpace& test, const FeSpace& trial, const BilinearForm& form);

enum class LinearKind {
  Source,           // f v (vector f . v on vector spaces)
  GradientSource,   // g . grad v, scalar spaces
  InterfaceSource,  // g v (vector g . v) on the interface
};

struct LinearForm {
  LinearKind kind = LinearKind::Source;
  ScalarCoefficient scalar;
  VectorCoefficient vector;
  int degree = 4;
};

void assemble_linear(const FeSpace& space, const LinearForm& form, Vector& out, int offset = 0,
                     double scale = 1.0);
Vector assemble_linear(const FeSpace& space, const LinearForm& form);

/// Integral of a pointwise quantity over the triangles of a domain.
double integrate(const KarstMesh& mesh, Domain domain, const ScalarCoefficient& f, int degree = 4);
/// Integral along the interface, 5-point Gauss per edge. Context triangle is
/// the conduit-side triangle.
double integrate_interface(const KarstMesh& mesh, const ScalarCoefficient& f);

/// Visits each quadrature point of the domain: (context, weight * |det J|).
void for_each_quadrature_point(const KarstMesh& mesh, Domain domain, int degree,
                               const std::function<void(const QuadContext&, double)>& visit);

}  // namespace chsd
