#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chsd/mesh.hpp"

namespace chsd {

using Vector = Eigen::VectorXd;

enum class Family { P1 = 1, P2 = 2 };
enum class Arity { Scalar = 1, Vector = 2 };
enum class Domain { Conduit, Matrix, Whole };

constexpr int kMaxBasis = 6;

/// Number of scalar basis functions per triangle.
constexpr int basis_size(Family family) { return family == Family::P1 ? 3 : 6; }

/// Lagrange basis on the reference triangle. P2 ordering: vertex functions
/// 0..2, then the midpoint function of the edge opposite vertex 0, 1, 2.
void eval_basis(Family family, const Vec2& xi, std::span<double> values);
void eval_basis_gradients(Family family, const Vec2& xi, std::span<Vec2> gradients);

/// x = origin + jacobian * xi for one triangle.
struct AffineMap {
  Vec2 origin;
  Mat2 jacobian;
  Mat2 inverse_transpose;
  double det = 0.0;

  static AffineMap of(const KarstMesh& mesh, int triangle);
  Vec2 to_physical(const Vec2& xi) const { return origin + jacobian * xi; }
  Vec2 to_reference(const Vec2& x) const { return inverse_transpose.transpose() * (x - origin); }
};

/// Basis values and physical gradients of one triangle at one point.
struct LocalBasis {
  int size = 0;
  std::array<double, kMaxBasis> value{};
  std::array<Vec2, kMaxBasis> gradient{};

  void evaluate(Family family, const AffineMap& map, const Vec2& xi);
};

/// Lagrange finite-element space over one region of a karst mesh.
///
/// Scalar DOFs are numbered region vertices first (ascending global vertex
/// index), then region edge midpoints for P2 (ascending global edge index).
/// Vector spaces are component-blocked: dof = component * n_scalar + scalar.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const KarstMesh> mesh, Domain domain, Family family, Arity arity);

  const KarstMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const KarstMesh>& mesh_ptr() const { return mesh_; }
  Domain domain() const { return domain_; }
  Family family() const { return family_; }
  Arity arity() const { return arity_; }
  int components() const { return static_cast<int>(arity_); }
  int local_size() const { return basis_size(family_); }

  int scalar_dof_count() const { return static_cast<int>(coordinates_.size()); }
  int dof_count() const { return components() * scalar_dof_count(); }
  int dof(int component, int scalar) const { return component * scalar_dof_count() + scalar; }

  bool contains(int triangle) const;
  /// Triangles of the domain, ascending.
  const std::vector<int>& triangles() const { return triangles_; }
  /// Scalar DOFs of a triangle in local basis order. Empty outside the domain.
  std::span<const int> cell_dofs(int triangle) const;
  const std::vector<Vec2>& dof_coordinates() const { return coordinates_; }

  /// Scalar DOFs located on a mesh edge (its two vertices, plus the midpoint
  /// for P2). Empty if the edge is not in the domain.
  std::vector<int> scalar_dofs_on_edge(int edge) const;

  /// Triangle of this space adjacent to an interface edge.
  int interface_triangle(const InterfaceEdge& edge) const;

 private:
  std::shared_ptr<const KarstMesh> mesh_;
  Domain domain_;
  Family family_;
  Arity arity_;
  std::vector<int> triangles_;
  std::vector<int> cell_dofs_;  // local_size() per triangle, -1 outside the domain
  std::vector<int> vertex_dof_;  // global vertex -> scalar dof or -1
  std::vector<int> edge_dof_;    // global edge -> scalar dof or -1 (P2)
  std::vector<Vec2> coordinates_;
};

bool same_mesh(const FeSpace& a, const FeSpace& b);

/// Coefficient vector on a shared space.
class FeFunction {
 public:
  FeFunction() = default;
  explicit FeFunction(std::shared_ptr<const FeSpace> space);
  FeFunction(std::shared_ptr<const FeSpace> space, Vector coefficients);

  /// Nodal interpolant of a scalar (or per-component) function.
  static FeFunction interpolate(std::shared_ptr<const FeSpace> space,
                                const std::function<double(const Vec2&)>& f);
  static FeFunction interpolate_vector(std::shared_ptr<const FeSpace> space,
                                       const std::function<Vec2(const Vec2&)>& f);

  const FeSpace& space() const { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
  const Vector& coefficients() const { return coefficients_; }
  Vector& coefficients() { return coefficients_; }

  double value(int triangle, const Vec2& xi, int component = 0) const;
  Vec2 gradient(int triangle, const Vec2& xi, int component = 0) const;
  Vec2 vector_value(int triangle, const Vec2& xi) const;
  /// Row c holds the gradient of component c.
  Mat2 vector_gradient(int triangle, const Vec2& xi) const;

  /// Same, at a physical point known to lie in `triangle`.
  double value_at(int triangle, const Vec2& x, int component = 0) const;
  Vec2 gradient_at(int triangle, const Vec2& x, int component = 0) const;
  Vec2 vector_value_at(int triangle, const Vec2& x) const;

 private:
  std::shared_ptr<const FeSpace> space_;
  Vector coefficients_;
};

}  // namespace chsd
