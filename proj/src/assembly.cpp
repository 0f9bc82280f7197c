#include "chsd/assembly.hpp"

#include <cmath>

#include "chsd/errors.hpp"
#include "chsd/quadrature.hpp"

namespace chsd {

namespace {

constexpr int kMaxLocal = 2 * kMaxBasis;
using LocalMatrix = Eigen::Matrix<double, kMaxLocal, kMaxLocal>;

double eval_or_one(const ScalarCoefficient& c, const QuadContext& ctx) { return c ? c(ctx) : 1.0; }

void require_same_mesh(const FeSpace& a, const FeSpace& b) {
  if (!same_mesh(a, b)) throw MeshMismatch("spaces are defined on different meshes");
}

void require_arity(const FeSpace& space, Arity arity, const char* what) {
  if (space.arity() != arity) throw ArityMismatch(what);
}

void check_arities(const FeSpace& test, const FeSpace& trial, const BilinearForm& form) {
  switch (form.kind) {
    case BilinearKind::Mass:
    case BilinearKind::Stiffness:
      if (test.arity() != trial.arity()) throw ArityMismatch("mass/stiffness need equal arities");
      if (form.tensor && test.arity() != Arity::Vector) throw ArityMismatch("tensor mass needs vector spaces");
      break;
    case BilinearKind::SymmetricGradient:
    case BilinearKind::InterfaceTangential:
      require_arity(test, Arity::Vector, "form needs a vector test space");
      require_arity(trial, Arity::Vector, "form needs a vector trial space");
      break;
    case BilinearKind::Divergence:
      require_arity(test, Arity::Scalar, "divergence needs a scalar test space");
      require_arity(trial, Arity::Vector, "divergence needs a vector trial space");
      break;
    case BilinearKind::GradientPairing:
      require_arity(test, Arity::Vector, "gradient pairing needs a vector test space");
      require_arity(trial, Arity::Scalar, "gradient pairing needs a scalar trial space");
      break;
    case BilinearKind::InterfaceNormal:
      if (test.arity() == trial.arity()) throw ArityMismatch("interface normal form pairs a vector with a scalar");
      break;
  }
}

// Accumulates w * (form integrand) for basis pairs at one point.
void accumulate(const BilinearForm& form, const QuadContext& ctx, double w, const LocalBasis& bt,
                int ct, const LocalBasis& bs, LocalMatrix& local) {
  const int nt = bt.size;
  const int ns = bs.size;
  switch (form.kind) {
    case BilinearKind::Mass: {
      if (form.tensor) {
        const Mat2 k = w * form.tensor(ctx);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int i = 0; i < nt; ++i)
              for (int j = 0; j < ns; ++j) local(a * nt + i, b * ns + j) += k(a, b) * bt.value[i] * bs.value[j];
      } else {
        const double c = w * eval_or_one(form.coefficient, ctx);
        for (int i = 0; i < nt; ++i)
          for (int j = 0; j < ns; ++j) {
            const double v = c * bt.value[i] * bs.value[j];
            for (int a = 0; a < ct; ++a) local(a * nt + i, a * ns + j) += v;
          }
      }
      break;
    }
    case BilinearKind::Stiffness: {
      const double c = w * eval_or_one(form.coefficient, ctx);
      for (int i = 0; i < nt; ++i)
        for (int j = 0; j < ns; ++j) {
          const double v = c * bt.gradient[i].dot(bs.gradient[j]);
          for (int a = 0; a < ct; ++a) local(a * nt + i, a * ns + j) += v;
        }
      break;
    }
    case BilinearKind::SymmetricGradient: {
      const double c = w * eval_or_one(form.coefficient, ctx);
      for (int i = 0; i < nt; ++i)
        for (int j = 0; j < ns; ++j) {
          const Vec2& g = bt.gradient[i];
          const Vec2& h = bs.gradient[j];
          const double gh = g.dot(h);
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              local(a * nt + i, b * ns + j) += 0.5 * c * ((a == b ? gh : 0.0) + g[b] * h[a]);
            }
        }
      break;
    }
    case BilinearKind::Divergence: {
      const double c = w * eval_or_one(form.coefficient, ctx);
      for (int i = 0; i < nt; ++i)
        for (int j = 0; j < ns; ++j)
          for (int b = 0; b < 2; ++b) local(i, b * ns + j) += c * bt.value[i] * bs.gradient[j][b];
      break;
    }
    case BilinearKind::GradientPairing: {
      const double c = w * eval_or_one(form.coefficient, ctx);
      for (int i = 0; i < nt; ++i)
        for (int j = 0; j < ns; ++j)
          for (int a = 0; a < 2; ++a) local(a * nt + i, j) += c * bt.value[i] * bs.gradient[j][a];
      break;
    }
    case BilinearKind::InterfaceTangential: {
      const double c = w * eval_or_one(form.coefficient, ctx);
      const Vec2& t = ctx.tangent;
      for (int i = 0; i < nt; ++i)
        for (int j = 0; j < ns; ++j)
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              local(a * nt + i, b * ns + j) += c * t[a] * t[b] * bt.value[i] * bs.value[j];
      break;
    }
    case BilinearKind::InterfaceNormal: {
      const double c = w * eval_or_one(form.coefficient, ctx);
      const Vec2& n = ctx.normal;
      for (int i = 0; i < nt; ++i)
        for (int j = 0; j < ns; ++j) {
          const double v = c * bt.value[i] * bs.value[j];
          if (ct == 2) {
            for (int a = 0; a < 2; ++a) local(a * nt + i, j) += v * n[a];
          } else {
            for (int b = 0; b < 2; ++b) local(i, b * ns + j) += v * n[b];
          }
        }
      break;
    }
  }
}

void scatter(const FeSpace& test, std::span<const int> rows, const FeSpace& trial,
             std::span<const int> cols, const LocalMatrix& local, Triplets& out, int row_offset,
             int col_offset, double scale) {
  const int nt = static_cast<int>(rows.size());
  const int ns = static_cast<int>(cols.size());
  for (int a = 0; a < test.components(); ++a)
    for (int i = 0; i < nt; ++i) {
      const int r = row_offset + test.dof(a, rows[i]);
      for (int b = 0; b < trial.components(); ++b)
        for (int j = 0; j < ns; ++j) {
          const double v = local(a * nt + i, b * ns + j);
          if (v != 0.0) out.emplace_back(r, col_offset + trial.dof(b, cols[j]), scale * v);
        }
    }
}

bool is_interface(BilinearKind kind) {
  return kind == BilinearKind::InterfaceTangential || kind == BilinearKind::InterfaceNormal;
}

template <typename Visit>
void for_each_interface_point(const KarstMesh& mesh, Visit&& visit) {
  const LineRule& line = gauss_line_rule();
  for (int k = 0; k < static_cast<int>(mesh.interface_edges().size()); ++k) {
    const InterfaceEdge& ie = mesh.interface_edges()[k];
    const auto& ev = mesh.edges()[ie.edge].vertices;
    const Vec2 a = mesh.vertices()[ev[0]];
    const Vec2 b = mesh.vertices()[ev[1]];
    const double length = (b - a).norm();
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const Vec2 x = a + line.points[q] * (b - a);
      visit(k, ie, x, line.weights[q] * length);
    }
  }
}

}  // namespace

void assemble_bilinear(const FeSpace& test, const FeSpace& trial, const BilinearForm& form,
                       Triplets& out, int row_offset, int col_offset, double scale) {
  require_same_mesh(test, trial);
  check_arities(test, trial, form);
  const KarstMesh& mesh = test.mesh();
  const int ct = test.components();
  LocalMatrix local;
  LocalBasis bt, bs;

  if (is_interface(form.kind)) {
    for_each_interface_point(mesh, [&](int k, const InterfaceEdge& ie, const Vec2& x, double w) {
      const int tt = test.interface_triangle(ie);
      const int ts = trial.interface_triangle(ie);
      if (!test.contains(tt) || !trial.contains(ts)) return;
      const AffineMap mt = AffineMap::of(mesh, tt);
      const AffineMap ms = AffineMap::of(mesh, ts);
      QuadContext ctx;
      ctx.triangle = tt;
      ctx.xi = mt.to_reference(x);
      ctx.point = x;
      ctx.region = mesh.region(tt);
      ctx.edge = k;
      ctx.normal = ie.normal;
      ctx.tangent = ie.tangent;
      bt.evaluate(test.family(), mt, ctx.xi);
      bs.evaluate(trial.family(), ms, ms.to_reference(x));
      local.setZero();
      accumulate(form, ctx, w, bt, ct, bs, local);
      scatter(test, test.cell_dofs(tt), trial, trial.cell_dofs(ts), local, out, row_offset, col_offset, scale);
    });
    return;
  }

  const QuadratureRule& rule = quadrature(form.degree);
  for (int t : test.triangles()) {
    if (!trial.contains(t)) continue;
    const AffineMap map = AffineMap::of(mesh, t);
    const double jac = std::abs(map.det);
    local.setZero();
    QuadContext ctx;
    ctx.triangle = t;
    ctx.region = mesh.region(t);
    for (int q = 0; q < rule.size(); ++q) {
      ctx.xi = rule.points[q];
      ctx.point = map.to_physical(ctx.xi);
      bt.evaluate(test.family(), map, ctx.xi);
      bs.evaluate(trial.family(), map, ctx.xi);
      accumulate(form, ctx, rule.weights[q] * jac, bt, ct, bs, local);
    }
    scatter(test, test.cell_dofs(t), trial, trial.cell_dofs(t), local, out, row_offset, col_offset, scale);
  }
}

SparseMatrix assemble_bilinear(const FeSpace& test, const FeSpace& trial, const BilinearForm& form) {
  Triplets triplets;
  assemble_bilinear(test, trial, form, triplets);
  return from_triplets(test.dof_count(), trial.dof_count(), triplets);
}

void assemble_linear(const FeSpace& space, const LinearForm& form, Vector& out, int offset, double scale) {
  const KarstMesh& mesh = space.mesh();
  const int nc = space.components();
  const bool vector_data = static_cast<bool>(form.vector);
  if (form.kind == LinearKind::GradientSource && space.arity() != Arity::Scalar) {
    throw ArityMismatch("gradient source needs a scalar space");
  }
  if (form.kind == LinearKind::GradientSource && !vector_data) {
    throw ArityMismatch("gradient source needs a vector coefficient");
  }
  if (form.kind != LinearKind::GradientSource && (space.arity() == Arity::Vector) != vector_data) {
    throw ArityMismatch("source arity does not match space arity");
  }
  LocalBasis basis;

  auto add = [&](const QuadContext& ctx, double w, std::span<const int> dofs) {
    const int n = basis.size;
    if (form.kind == LinearKind::GradientSource) {
      const Vec2 g = w * form.vector(ctx);
      for (int i = 0; i < n; ++i) out[offset + space.dof(0, dofs[i])] += scale * g.dot(basis.gradient[i]);
    } else if (vector_data) {
      const Vec2 f = w * form.vector(ctx);
      for (int a = 0; a < nc; ++a)
        for (int i = 0; i < n; ++i) out[offset + space.dof(a, dofs[i])] += scale * f[a] * basis.value[i];
    } else {
      const double f = w * form.scalar(ctx);
      for (int i = 0; i < n; ++i) out[offset + space.dof(0, dofs[i])] += scale * f * basis.value[i];
    }
  };

  if (form.kind == LinearKind::InterfaceSource) {
    for_each_interface_point(mesh, [&](int k, const InterfaceEdge& ie, const Vec2& x, double w) {
      const int t = space.interface_triangle(ie);
      if (!space.contains(t)) return;
      const AffineMap map = AffineMap::of(mesh, t);
      QuadContext ctx;
      ctx.triangle = t;
      ctx.xi = map.to_reference(x);
      ctx.point = x;
      ctx.region = mesh.region(t);
      ctx.edge = k;
      ctx.normal = ie.normal;
      ctx.tangent = ie.tangent;
      basis.evaluate(space.family(), map, ctx.xi);
      add(ctx, w, space.cell_dofs(t));
    });
    return;
  }

  const QuadratureRule& rule = quadrature(form.degree);
  for (int t : space.triangles()) {
    const AffineMap map = AffineMap::of(mesh, t);
    const double jac = std::abs(map.det);
    QuadContext ctx;
    ctx.triangle = t;
    ctx.region = mesh.region(t);
    const auto dofs = space.cell_dofs(t);
    for (int q = 0; q < rule.size(); ++q) {
      ctx.xi = rule.points[q];
      ctx.point = map.to_physical(ctx.xi);
      basis.evaluate(space.family(), map, ctx.xi);
      add(ctx, rule.weights[q] * jac, dofs);
    }
  }
}

Vector assemble_linear(const FeSpace& space, const LinearForm& form) {
  Vector out = Vector::Zero(space.dof_count());
  assemble_linear(space, form, out);
  return out;
}

void for_each_quadrature_point(const KarstMesh& mesh, Domain domain, int degree,
                               const std::function<void(const QuadContext&, double)>& visit) {
  const QuadratureRule& rule = quadrature(degree);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Region region = mesh.region(t);
    if (domain == Domain::Conduit && region != Region::Conduit) continue;
    if (domain == Domain::Matrix && region != Region::Matrix) continue;
    const AffineMap map = AffineMap::of(mesh, t);
    const double jac = std::abs(map.det);
    QuadContext ctx;
    ctx.triangle = t;
    ctx.region = region;
    for (int q = 0; q < rule.size(); ++q) {
      ctx.xi = rule.points[q];
      ctx.point = map.to_physical(ctx.xi);
      visit(ctx, rule.weights[q] * jac);
    }
  }
}

double integrate(const KarstMesh& mesh, Domain domain, const ScalarCoefficient& f, int degree) {
  double sum = 0.0;
  for_each_quadrature_point(mesh, domain, degree, [&](const QuadContext& ctx, double w) { sum += w * f(ctx); });
  return sum;
}

double integrate_interface(const KarstMesh& mesh, const ScalarCoefficient& f) {
  double sum = 0.0;
  for_each_interface_point(mesh, [&](int k, const InterfaceEdge& ie, const Vec2& x, double w) {
    const AffineMap map = AffineMap::of(mesh, ie.conduit_triangle);
    QuadContext ctx;
    ctx.triangle = ie.conduit_triangle;
    ctx.xi = map.to_reference(x);
    ctx.point = x;
    ctx.region = Region::Conduit;
    ctx.edge = k;
    ctx.normal = ie.normal;
    ctx.tangent = ie.tangent;
    sum += w * f(ctx);
  });
  return sum;
}

}  // namespace chsd
