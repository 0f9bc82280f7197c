#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chsd/analysis.hpp"
#include "chsd/assembly.hpp"
#include "chsd/errors.hpp"
#include "test_support.hpp"

namespace chsd {
namespace {

using std::numbers::pi;
using testing::random_vector;
using testing::to_oracle;

std::shared_ptr<const FeSpace> phase_space(int n, Family f = Family::P1) {
  return std::make_shared<const FeSpace>(std::make_shared<const KarstMesh>(build_karst_mesh(n, n, 0.5)),
                                         Domain::Whole, f, Arity::Scalar);
}

double cosine(const Vec2& x) { return std::cos(pi * x.x()) * std::cos(pi * x.y()); }
Vec2 cosine_gradient(const Vec2& x) {
  return {-pi * std::sin(pi * x.x()) * std::cos(pi * x.y()), -pi * std::cos(pi * x.x()) * std::sin(pi * x.y())};
}

// Energy and dissipation from exact polynomial integration on the oracle spaces.
EnergyReport oracle_energy(const oracle::Problem& pb, const oracle::Params& prm, const oracle::FluidVectors& u,
                           const std::vector<double>& phi, const std::vector<double>& mu) {
  using oracle::Poly;
  EnergyReport e;
  double grad_sq = 0.0, well = 0.0, flux = 0.0, strain = 0.0, drag = 0.0, friction = 0.0;
  const auto split = [](const std::vector<double>& c) {
    const std::size_t n = c.size() / 2;
    return std::pair{std::vector<double>(c.begin(), c.begin() + n), std::vector<double>(c.begin() + n, c.end())};
  };
  const auto [ucx, ucy] = split(u.u_c);
  const auto [umx, umy] = split(u.u_m);
  const double det = prm.perm[0][0] * prm.perm[1][1] - prm.perm[0][1] * prm.perm[1][0];
  const double kxx = prm.perm[1][1] / det, kyy = prm.perm[0][0] / det, kxy = -prm.perm[0][1] / det;
  const double nu = prm.viscosity.low;
  for (std::size_t t = 0; t < pb.mesh.triangles.size(); ++t) {
    const auto& tri = pb.mesh.triangles[t];
    const auto area = [&](const Poly& f) { return integrate(f, tri.p[0], tri.p[1], tri.p[2]); };
    const Poly p = restrict(pb.phase, phi, t);
    const Poly m = restrict(pb.phase, mu, t);
    const Poly s = p * p - Poly(1.0);
    grad_sq += area(p.dx() * p.dx() + p.dy() * p.dy());
    well += area(0.25 * s * s);
    flux += prm.mobility.low * area(m.dx() * m.dx() + m.dy() * m.dy());
    if (tri.conduit) {
      const Poly a = restrict(pb.vel_c, ucx, t), b = restrict(pb.vel_c, ucy, t);
      e.kinetic_conduit += 0.5 * prm.rho0 * area(a * a + b * b);
      const Poly shear = a.dy() + b.dx();
      strain += 2.0 * nu * area(a.dx() * a.dx() + b.dy() * b.dy() + 0.5 * shear * shear);
    } else {
      const Poly a = restrict(pb.vel_m, umx, t), b = restrict(pb.vel_m, umy, t);
      e.kinetic_matrix += 0.5 * prm.rho0 / prm.chi * area(a * a + b * b);
      drag += nu * area(kxx * a * a + 2.0 * kxy * a * b + kyy * b * b);
    }
  }
  for (const auto& seg : pb.mesh.interface) {
    for (std::size_t t = 0; t < pb.mesh.triangles.size(); ++t) {
      const auto& tri = pb.mesh.triangles[t];
      if (!tri.conduit) continue;
      int hits = 0;
      for (const auto& q : tri.p)
        for (const auto& v : seg) hits += q.x == v.x && q.y == v.y;
      if (hits < 2) continue;
      const Poly a = restrict(pb.vel_c, ucx, t);
      friction += prm.alpha * nu / std::sqrt(prm.perm[0][0] + prm.perm[1][1]) * integrate_segment(a * a, seg[0], seg[1]);
    }
  }
  e.interfacial = prm.gamma * (0.5 * prm.epsilon * grad_sq + well / prm.epsilon);
  e.total = e.kinetic_conduit + e.kinetic_matrix + e.interfacial;
  e.dissipation = flux + strain + drag + friction;
  return e;
}

TEST(Energy, EquilibriumHasZeroEnergy) {
  const Discretization disc = Discretization::build(std::make_shared<const KarstMesh>(build_karst_mesh(4, 4, 0.5)));
  FieldSet s = FieldSet::zero(disc);
  s.ch.phi.coefficients().setConstant(1.0);
  const EnergyReport e = energy(s, PhysParams{});
  EXPECT_EQ(e.total, 0.0);
  EXPECT_EQ(e.dissipation, 0.0);
}

TEST(Energy, ZeroPhaseGivesWellHeight) {
  const Discretization disc = Discretization::build(std::make_shared<const KarstMesh>(build_karst_mesh(4, 4, 0.5)));
  PhysParams params;
  params.gamma = 1.7;
  const EnergyReport e = energy(FieldSet::zero(disc), params);
  EXPECT_NEAR(e.total, params.gamma / (4.0 * params.epsilon), 1e-12);
  EXPECT_EQ(e.kinetic_conduit + e.kinetic_matrix, 0.0);
}

TEST(Energy, RandomStateMatchesExactIntegration) {
  const Discretization disc = Discretization::build(std::make_shared<const KarstMesh>(build_karst_mesh(2, 2, 0.5)));
  const oracle::Problem pb = oracle::make_problem(2, 2, 0.5, 1);
  PhysParams params;
  params.rho0 = 1.4;
  params.chi = 0.3;
  params.gamma = 0.9;
  params.epsilon = 0.2;
  params.alpha_bjsj = 0.6;
  params.permeability << 1.5, 0.4, 0.4, 0.8;
  params.viscosity = {LawKind::Constant, 1.3, 1.3};
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    FieldSet s = FieldSet::zero(disc);
    s.ch.phi.coefficients() = random_vector(rng, disc.phase->dof_count(), -1.2, 1.2);
    s.ch.mu.coefficients() = random_vector(rng, disc.phase->dof_count(), -2.0, 2.0);
    s.fluid.u_c.coefficients() = random_vector(rng, disc.velocity_c->dof_count(), -1.0, 1.0);
    s.fluid.u_m.coefficients() = random_vector(rng, disc.velocity_m->dof_count(), -1.0, 1.0);
    const EnergyReport lib = energy(s, params);
    const EnergyReport ref = oracle_energy(pb, to_oracle(params), to_oracle(s.fluid, pb), to_oracle(s.ch.phi, pb.phase),
                                           to_oracle(s.ch.mu, pb.phase));
    EXPECT_NEAR(lib.kinetic_conduit, ref.kinetic_conduit, 1e-10 * ref.total);
    EXPECT_NEAR(lib.kinetic_matrix, ref.kinetic_matrix, 1e-10 * ref.total);
    EXPECT_NEAR(lib.interfacial, ref.interfacial, 1e-10 * ref.total);
    EXPECT_NEAR(lib.total, ref.total, 1e-10 * ref.total);
    EXPECT_NEAR(lib.dissipation, ref.dissipation, 1e-10 * ref.dissipation);
    EXPECT_NEAR(lib.total, lib.kinetic_conduit + lib.kinetic_matrix + lib.interfacial, 1e-13 * lib.total);
    EXPECT_GE(lib.dissipation, 0.0);
  }
}

TEST(DiscreteLaplacian, ConstantsMapToZero) {
  const auto space = phase_space(4);
  const FeFunction c(space, Vector::Constant(space->dof_count(), 3.5));
  EXPECT_LE(discrete_laplacian(c).coefficients().cwiseAbs().maxCoeff(), 1e-11);
}

TEST(DiscreteLaplacian, MeanZeroAndLinear) {
  std::mt19937_64 rng(41);
  for (Family f : {Family::P1, Family::P2}) {
    const auto space = phase_space(4, f);
    const PhaseOperatorCache ops(space);
    for (int trial = 0; trial < 20; ++trial) {
      const FeFunction v(space, random_vector(rng, space->dof_count(), -1.0, 1.0));
      const FeFunction w(space, random_vector(rng, space->dof_count(), -1.0, 1.0));
      const double a = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
      const double b = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
      const FeFunction lv = discrete_laplacian(v, ops);
      const FeFunction lw = discrete_laplacian(w, ops);
      const FeFunction comb(space, a * v.coefficients() + b * w.coefficients());
      EXPECT_LE(std::abs(phase_mass(lv)), 1e-12);
      const Vector expected = a * lv.coefficients() + b * lw.coefficients();
      EXPECT_LE((discrete_laplacian(comb, ops).coefficients() - expected).cwiseAbs().maxCoeff(),
                1e-12 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(NegativeNorm, ZeroAndIdentity) {
  std::mt19937_64 rng(43);
  const auto space = phase_space(6);
  const PhaseOperatorCache ops(space);
  EXPECT_EQ(neg_one_h_norm(FeFunction(space), ops), 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector c = random_vector(rng, space->dof_count(), -1.0, 1.0);
    c.array() -= ops.mass_row().dot(c);
    const FeFunction z(space, c);
    const FeFunction t = inverse_laplacian(z, ops);
    const double lhs = std::pow(neg_one_h_norm(z, ops), 2);
    const double rhs = z.coefficients().dot(ops.mass() * t.coefficients());
    EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
    EXPECT_LE(std::abs(ops.mass_row().dot(t.coefficients())), 1e-12);
  }
}

TEST(NegativeNorm, RejectsFieldsWithMass) {
  const auto space = phase_space(2);
  EXPECT_THROW(neg_one_h_norm(FeFunction(space, Vector::Ones(space->dof_count()))), NotMeanZero);
}

TEST(NegativeNorm, BoundedByL2UniformlyInH) {
  // cos(pi x) cos(pi y) is a Neumann eigenfunction with eigenvalue 2 pi^2, and
  // every mean-zero field obeys ||z||_{-1} <= ||z|| / pi on the unit square.
  double ratio = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const auto space = phase_space(n);
    FeFunction z = FeFunction::interpolate(space, cosine);
    z.coefficients().array() -= phase_mass(z);
    ratio = neg_one_h_norm(z) / l2_norm(z);
    EXPECT_LE(ratio, 1.0 / pi);
  }
  EXPECT_NEAR(ratio, 1.0 / (pi * std::sqrt(2.0)), 2e-3);
}

TEST(RitzProjection, ReproducesSpaceMembers) {
  const auto p1 = phase_space(4, Family::P1);
  const auto affine = ritz_project([](const Vec2& x) { return 0.3 + 2.0 * x.x() - x.y(); },
                                   [](const Vec2&) { return Vec2(2.0, -1.0); }, p1);
  for (int i = 0; i < p1->dof_count(); ++i) {
    const Vec2& x = p1->dof_coordinates()[i];
    EXPECT_NEAR(affine.coefficients()[i], 0.3 + 2.0 * x.x() - x.y(), 1e-12);
  }
  const auto p2 = phase_space(4, Family::P2);
  const auto quad = [](const Vec2& x) { return x.x() * x.y() - 0.5 * x.y() * x.y() + x.x(); };
  const auto quad_grad = [](const Vec2& x) { return Vec2(x.y() + 1.0, x.x() - x.y()); };
  const FeFunction once = ritz_project(quad, quad_grad, p2);
  const FeFunction nodal = FeFunction::interpolate(p2, quad);
  EXPECT_LE((once.coefficients() - nodal.coefficients()).cwiseAbs().maxCoeff(), 1e-11);

  const auto constant = ritz_project([](const Vec2&) { return 0.3; }, [](const Vec2&) { return Vec2(0.0, 0.0); }, p1);
  EXPECT_LE((constant.coefficients().array() - 0.3).abs().maxCoeff(), 1e-12);
}

TEST(RitzProjection, PreservesMeanAndIsOrthogonal) {
  const auto space = phase_space(8);
  const FeFunction r = ritz_project(cosine, cosine_gradient, space);
  const double mean = integrate(space->mesh(), Domain::Whole, [](const QuadContext& q) { return cosine(q.point); }, 6);
  EXPECT_NEAR(phase_mass(r), mean, 1e-12);
  LinearForm load{LinearKind::GradientSource, {}, [](const QuadContext& q) { return cosine_gradient(q.point); }, 6};
  const SparseMatrix k = assemble_bilinear(*space, *space, {BilinearKind::Stiffness});
  EXPECT_LE((k * r.coefficients() - assemble_linear(*space, load)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RitzProjection, GradientErrorHalvesUnderRefinement) {
  std::vector<double> errors;
  for (int n : {4, 8, 16, 32}) {
    const auto space = phase_space(n);
    const FeFunction r = ritz_project(cosine, cosine_gradient, space);
    double e2 = 0.0;
    for_each_quadrature_point(space->mesh(), Domain::Whole, 6, [&](const QuadContext& q, double w) {
      e2 += w * (r.gradient(q.triangle, q.xi) - cosine_gradient(q.point)).squaredNorm();
    });
    errors.push_back(std::sqrt(e2));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    EXPECT_NEAR(std::log2(errors[i - 1] / errors[i]), 1.0, 0.1) << "level " << i;
  }
}

TEST(GagliardoNirenberg, UnitFieldHasUnitRatio) {
  const auto space = phase_space(4);
  EXPECT_NEAR(gn_probe(FeFunction(space, Vector::Ones(space->dof_count()))), 1.0, 1e-12);
  EXPECT_THROW(gn_probe(FeFunction(space)), ZeroField);
}

TEST(GagliardoNirenberg, RatioIsPositiveAndUniform) {
  std::mt19937_64 rng(47);
  const auto coarse = phase_space(4);
  for (int trial = 0; trial < 10; ++trial) {
    EXPECT_GT(gn_probe(FeFunction(coarse, random_vector(rng, coarse->dof_count(), -1.0, 1.0))), 0.0);
  }
  double lo = 1e300, hi = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const double r = gn_probe(FeFunction::interpolate(phase_space(n), cosine));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  EXPECT_LT(hi / lo, 10.0);
}

TEST(Norms, SupNormSeesQuadraturePoints) {
  const auto p2 = phase_space(2, Family::P2);
  const FeFunction bump = FeFunction::interpolate(p2, [](const Vec2& x) { return x.x() * (1.0 - x.x()); });
  EXPECT_NEAR(sup_norm(bump), 0.25, 1e-12);
  EXPECT_NEAR(l2_norm(FeFunction(p2, Vector::Ones(p2->dof_count()))), 1.0, 1e-13);
  EXPECT_NEAR(h1_seminorm(FeFunction::interpolate(p2, [](const Vec2& x) { return 3.0 * x.y(); })), 3.0, 1e-13);
}

}  // namespace
}  // namespace chsd
