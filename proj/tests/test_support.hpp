#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "chsd/fields.hpp"
#include "chsd/forcing.hpp"
#include "chsd/params.hpp"
#include "oracle/dense_oracle.hpp"

namespace chsd::testing {

inline oracle::Params to_oracle(const PhysParams& p) {
  oracle::Params o;
  o.rho0 = p.rho0;
  o.chi = p.chi;
  o.gamma = p.gamma;
  o.epsilon = p.epsilon;
  o.alpha = p.alpha_bjsj;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) o.perm[i][j] = p.permeability(i, j);
  const auto law = [](const MaterialLaw& m) {
    return oracle::Law{m.kind == LawKind::ClampedQuadratic, m.low, m.high};
  };
  o.mobility = law(p.mobility);
  o.viscosity = law(p.viscosity);
  return o;
}

/// perm[s] = oracle node of library scalar dof s, matched by coordinates.
inline std::vector<int> node_map(const FeSpace& lib, const oracle::Space& ora) {
  std::vector<int> perm;
  for (const Vec2& x : lib.dof_coordinates()) {
    const int k = ora.find({x.x(), x.y()});
    if (k < 0) throw std::logic_error("library dof without oracle node");
    perm.push_back(k);
  }
  if (static_cast<int>(perm.size()) != ora.size()) throw std::logic_error("dof count mismatch");
  return perm;
}

inline std::vector<double> to_oracle(const FeFunction& f, const oracle::Space& ora) {
  const auto perm = node_map(f.space(), ora);
  const int n = f.space().scalar_dof_count();
  std::vector<double> out(f.space().dof_count());
  for (int c = 0; c < f.space().components(); ++c)
    for (int s = 0; s < n; ++s) out[c * n + perm[s]] = f.coefficients()[f.space().dof(c, s)];
  return out;
}

inline Vector from_oracle(const std::vector<double>& v, const FeSpace& lib, const oracle::Space& ora) {
  const auto perm = node_map(lib, ora);
  const int n = lib.scalar_dof_count();
  Vector out(lib.dof_count());
  for (int c = 0; c < lib.components(); ++c)
    for (int s = 0; s < n; ++s) out[lib.dof(c, s)] = v[c * n + perm[s]];
  return out;
}

inline oracle::FluidVectors to_oracle(const FluidState& s, const oracle::Problem& pb) {
  return {to_oracle(s.u_c, pb.vel_c), to_oracle(s.p_c, pb.pre_c), to_oracle(s.u_m, pb.vel_m),
          to_oracle(s.p_m, pb.pre_m)};
}

inline ForcingTerms to_forcing(const oracle::Sources& src) {
  ForcingTerms f;
  const auto scalar = [](oracle::Poly p) { return [p](const Vec2& x, double) { return p({x.x(), x.y()}); }; };
  const auto field = [](std::array<oracle::Poly, 2> p) {
    return [p](const Vec2& x, double) { return Vec2(p[0]({x.x(), x.y()}), p[1]({x.x(), x.y()})); };
  };
  f.phase = scalar(src.phase);
  f.potential = scalar(src.potential);
  f.conduit = field(src.conduit);
  f.matrix = field(src.matrix);
  f.interface = field(src.interface);
  return f;
}

/// Random polynomial of total degree `degree` with coefficients in [-1, 1].
inline oracle::Poly random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  oracle::Poly p;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) p.at(a, b) = u(rng);
  return p;
}

inline Vector random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::logic_error("size mismatch");
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

}  // namespace chsd::testing
