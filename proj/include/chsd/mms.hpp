#pragma once

#include <memory>
#include <string>

#include "chsd/forcing.hpp"
#include "chsd/params.hpp"

namespace chsd {

/// Phase quantities of an exact solution at one point.
struct PhaseSample {
  double phi = 0.0;
  double phi_t = 0.0;
  Vec2 grad_phi = Vec2::Zero();
  double lap_phi = 0.0;
  double mu = 0.0;
  Vec2 grad_mu = Vec2::Zero();
  double lap_mu = 0.0;
};

/// Flow quantities in one subdomain. Row i of grad_u is grad u_i.
struct FlowSample {
  Vec2 u = Vec2::Zero();
  Vec2 u_t = Vec2::Zero();
  Mat2 grad_u = Mat2::Zero();
  Vec2 lap_u = Vec2::Zero();
  double p = 0.0;
  Vec2 grad_p = Vec2::Zero();
};

/// Closed-form solution of the continuous system on the unit square with
/// the interface at y = split_y.
class ExactSolution {
 public:
  virtual ~ExactSolution() = default;
  virtual std::string name() const = 0;
  virtual double split_y() const = 0;
  virtual PhaseSample phase(const Vec2& x, double t) const = 0;
  virtual FlowSample conduit(const Vec2& x, double t) const = 0;
  virtual FlowSample matrix(const Vec2& x, double t) const = 0;

  /// Flow sample of the subdomain containing x (conduit above the interface).
  FlowSample flow(const Vec2& x, double t) const { return x.y() > split_y() ? conduit(x, t) : matrix(x, t); }
};

/// g(t) = amplitude * (offset + sin(omega t + shift)).
struct TimeProfile {
  double amplitude = 1.0;
  double offset = 0.0;
  double omega = 1.0;
  double shift = 0.0;

  double value(double t) const;
  double derivative(double t) const;
};

/// Trigonometric family:
///   phi = g_phi(t) cos(pi x) cos(pi y),  mu = gamma[(phi^3 - phi)/eps + 2 pi^2 eps phi]
///   u = curl psi with psi_c = g_u sin^2(pi x)(1 - y)^2 and
///   psi_m = g_u sin^2(pi x)(1 - s)^2 y / s, so u_c = 0 on the outer conduit
///   boundary, u_m . n = 0 on the outer matrix boundary and the normal
///   velocity is continuous across y = s
///   p_c = p_m = g_p(t) cos(pi x) cos(pi y)
struct TrigProfiles {
  TimeProfile phi{0.5, 0.0, 10.0, 1.5707963267948966};
  TimeProfile u{0.5, 0.0, 10.0, 1.5707963267948966};
  TimeProfile p{0.05, 0.0, 10.0, 1.5707963267948966};
};

std::shared_ptr<const ExactSolution> make_trig_solution(const PhysParams& params, double split_y = 0.5,
                                                         TrigProfiles profiles = {});
/// phi = 1, u = 0, p = 0.
std::shared_ptr<const ExactSolution> make_equilibrium_solution(double split_y = 0.5);
/// Family id "trig" or "equilibrium". Throws ValidationError.
std::shared_ptr<const ExactSolution> make_exact_solution(const std::string& family, const PhysParams& params,
                                                         double split_y = 0.5);

/// Residuals of the continuous equations under the exact fields:
///   phase     = phi_t + u . grad phi - div(M(phi) grad mu)
///   potential = gamma (phi^3 - phi)/eps - gamma eps lap phi - mu
///   conduit   = rho0 u_t - div(2 nu D(u)) + grad p + phi grad mu
///   matrix    = (rho0/chi) u_t + nu Pi^{-1} u + grad p + phi grad mu
///   interface = g_n n + g_t tau with g_n = 2 nu n.D(u)n - p_c + p_m and
///               g_t = 2 nu tau.D(u)n + alpha nu / sqrt(tr Pi) tau.u_c
ForcingTerms mms_forcing(std::shared_ptr<const ExactSolution> exact, const PhysParams& params);

}  // namespace chsd
