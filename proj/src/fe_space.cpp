#include "chsd/fe_space.hpp"

#include <algorithm>

#include "chsd/errors.hpp"

namespace chsd {

void eval_basis(Family family, const Vec2& xi, std::span<double> values) {
  const double l0 = 1.0 - xi.x() - xi.y();
  const double l1 = xi.x();
  const double l2 = xi.y();
  if (family == Family::P1) {
    values[0] = l0;
    values[1] = l1;
    values[2] = l2;
    return;
  }
  values[0] = l0 * (2.0 * l0 - 1.0);
  values[1] = l1 * (2.0 * l1 - 1.0);
  values[2] = l2 * (2.0 * l2 - 1.0);
  values[3] = 4.0 * l1 * l2;
  values[4] = 4.0 * l2 * l0;
  values[5] = 4.0 * l0 * l1;
}

void eval_basis_gradients(Family family, const Vec2& xi, std::span<Vec2> gradients) {
  const Vec2 g0(-1.0, -1.0), g1(1.0, 0.0), g2(0.0, 1.0);
  if (family == Family::P1) {
    gradients[0] = g0;
    gradients[1] = g1;
    gradients[2] = g2;
    return;
  }
  const double l0 = 1.0 - xi.x() - xi.y();
  const double l1 = xi.x();
  const double l2 = xi.y();
  gradients[0] = (4.0 * l0 - 1.0) * g0;
  gradients[1] = (4.0 * l1 - 1.0) * g1;
  gradients[2] = (4.0 * l2 - 1.0) * g2;
  gradients[3] = 4.0 * (l1 * g2 + l2 * g1);
  gradients[4] = 4.0 * (l2 * g0 + l0 * g2);
  gradients[5] = 4.0 * (l0 * g1 + l1 * g0);
}

AffineMap AffineMap::of(const KarstMesh& mesh, int triangle) {
  const auto& tri = mesh.triangles()[triangle];
  const auto& v = mesh.vertices();
  AffineMap map;
  map.origin = v[tri[0]];
  map.jacobian.col(0) = v[tri[1]] - v[tri[0]];
  map.jacobian.col(1) = v[tri[2]] - v[tri[0]];
  map.det = map.jacobian.determinant();
  map.inverse_transpose = map.jacobian.inverse().transpose();
  return map;
}

void LocalBasis::evaluate(Family family, const AffineMap& map, const Vec2& xi) {
  size = basis_size(family);
  eval_basis(family, xi, value);
  std::array<Vec2, kMaxBasis> ref;
  eval_basis_gradients(family, xi, ref);
  for (int i = 0; i < size; ++i) {
    gradient[i] = map.inverse_transpose * ref[i];
  }
}

namespace {

bool in_domain(Domain domain, Region region) {
  switch (domain) {
    case Domain::Whole:
      return true;
    case Domain::Conduit:
      return region == Region::Conduit;
    case Domain::Matrix:
      return region == Region::Matrix;
  }
  return false;
}

}  // namespace

FeSpace::FeSpace(std::shared_ptr<const KarstMesh> mesh, Domain domain, Family family, Arity arity)
    : mesh_(std::move(mesh)), domain_(domain), family_(family), arity_(arity) {
  const KarstMesh& m = *mesh_;
  vertex_dof_.assign(m.num_vertices(), -1);
  edge_dof_.assign(m.num_edges(), -1);
  for (int t = 0; t < m.num_triangles(); ++t) {
    if (!in_domain(domain_, m.region(t))) continue;
    triangles_.push_back(t);
    for (int v : m.triangles()[t]) vertex_dof_[v] = 0;
    if (family_ == Family::P2) {
      for (int e : m.triangle_edges(t)) edge_dof_[e] = 0;
    }
  }
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (vertex_dof_[v] < 0) continue;
    vertex_dof_[v] = static_cast<int>(coordinates_.size());
    coordinates_.push_back(m.vertices()[v]);
  }
  for (int e = 0; e < m.num_edges(); ++e) {
    if (edge_dof_[e] < 0) continue;
    edge_dof_[e] = static_cast<int>(coordinates_.size());
    const auto& ev = m.edges()[e].vertices;
    coordinates_.push_back(0.5 * (m.vertices()[ev[0]] + m.vertices()[ev[1]]));
  }

  const int n = local_size();
  cell_dofs_.assign(static_cast<std::size_t>(m.num_triangles()) * n, -1);
  for (int t : triangles_) {
    int* dofs = &cell_dofs_[static_cast<std::size_t>(t) * n];
    for (int i = 0; i < 3; ++i) dofs[i] = vertex_dof_[m.triangles()[t][i]];
    if (family_ == Family::P2) {
      for (int i = 0; i < 3; ++i) dofs[3 + i] = edge_dof_[m.triangle_edges(t)[i]];
    }
  }
}

bool FeSpace::contains(int triangle) const {
  return cell_dofs_[static_cast<std::size_t>(triangle) * local_size()] >= 0;
}

std::span<const int> FeSpace::cell_dofs(int triangle) const {
  if (!contains(triangle)) return {};
  return {&cell_dofs_[static_cast<std::size_t>(triangle) * local_size()],
          static_cast<std::size_t>(local_size())};
}

std::vector<int> FeSpace::scalar_dofs_on_edge(int edge) const {
  const auto& ev = mesh_->edges()[edge].vertices;
  std::vector<int> dofs;
  if (vertex_dof_[ev[0]] < 0 || vertex_dof_[ev[1]] < 0) return dofs;
  const auto& tris = mesh_->edges()[edge].triangles;
  const bool owned = (tris[0] >= 0 && contains(tris[0])) || (tris[1] >= 0 && contains(tris[1]));
  if (!owned) return dofs;
  dofs = {vertex_dof_[ev[0]], vertex_dof_[ev[1]]};
  if (family_ == Family::P2) dofs.push_back(edge_dof_[edge]);
  return dofs;
}

int FeSpace::interface_triangle(const InterfaceEdge& edge) const {
  return domain_ == Domain::Matrix ? edge.matrix_triangle : edge.conduit_triangle;
}

bool same_mesh(const FeSpace& a, const FeSpace& b) { return a.mesh_ptr() == b.mesh_ptr(); }

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), coefficients_(Vector::Zero(space_->dof_count())) {}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space, Vector coefficients)
    : space_(std::move(space)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != space_->dof_count()) {
    throw DimensionMismatch("coefficient vector does not match space dimension");
  }
}

FeFunction FeFunction::interpolate(std::shared_ptr<const FeSpace> space,
                                   const std::function<double(const Vec2&)>& f) {
  FeFunction out(std::move(space));
  const auto& xs = out.space().dof_coordinates();
  for (int c = 0; c < out.space().components(); ++c) {
    for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
      out.coefficients_[out.space().dof(c, i)] = f(xs[i]);
    }
  }
  return out;
}

FeFunction FeFunction::interpolate_vector(std::shared_ptr<const FeSpace> space,
                                          const std::function<Vec2(const Vec2&)>& f) {
  FeFunction out(std::move(space));
  if (out.space().arity() != Arity::Vector) throw ArityMismatch("vector interpolation on scalar space");
  const auto& xs = out.space().dof_coordinates();
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
    const Vec2 value = f(xs[i]);
    out.coefficients_[out.space().dof(0, i)] = value.x();
    out.coefficients_[out.space().dof(1, i)] = value.y();
  }
  return out;
}

double FeFunction::value(int triangle, const Vec2& xi, int component) const {
  const auto dofs = space_->cell_dofs(triangle);
  std::array<double, kMaxBasis> phi;
  eval_basis(space_->family(), xi, phi);
  double sum = 0.0;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    sum += coefficients_[space_->dof(component, dofs[i])] * phi[i];
  }
  return sum;
}

Vec2 FeFunction::gradient(int triangle, const Vec2& xi, int component) const {
  const auto dofs = space_->cell_dofs(triangle);
  std::array<Vec2, kMaxBasis> ref;
  eval_basis_gradients(space_->family(), xi, ref);
  Vec2 sum = Vec2::Zero();
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    sum += coefficients_[space_->dof(component, dofs[i])] * ref[i];
  }
  return AffineMap::of(space_->mesh(), triangle).inverse_transpose * sum;
}

Vec2 FeFunction::vector_value(int triangle, const Vec2& xi) const {
  return {value(triangle, xi, 0), value(triangle, xi, 1)};
}

Mat2 FeFunction::vector_gradient(int triangle, const Vec2& xi) const {
  Mat2 g;
  g.row(0) = gradient(triangle, xi, 0).transpose();
  g.row(1) = gradient(triangle, xi, 1).transpose();
  return g;
}

double FeFunction::value_at(int triangle, const Vec2& x, int component) const {
  return value(triangle, AffineMap::of(space_->mesh(), triangle).to_reference(x), component);
}

Vec2 FeFunction::gradient_at(int triangle, const Vec2& x, int component) const {
  return gradient(triangle, AffineMap::of(space_->mesh(), triangle).to_reference(x), component);
}

Vec2 FeFunction::vector_value_at(int triangle, const Vec2& x) const {
  return vector_value(triangle, AffineMap::of(space_->mesh(), triangle).to_reference(x));
}

}  // namespace chsd
