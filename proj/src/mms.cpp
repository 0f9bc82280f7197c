#include "chsd/mms.hpp"

#include <cmath>
#include <numbers>

#include "chsd/errors.hpp"

namespace chsd {

double TimeProfile::value(double t) const { return amplitude * (offset + std::sin(omega * t + shift)); }

double TimeProfile::derivative(double t) const { return amplitude * omega * std::cos(omega * t + shift); }

namespace {

constexpr double kPi = std::numbers::pi;

class TrigSolution final : public ExactSolution {
 public:
  TrigSolution(double gamma, double epsilon, double split, TrigProfiles profiles)
      : gamma_(gamma), epsilon_(epsilon), split_(split), beta_((1.0 - split) * (1.0 - split) / split),
        profiles_(profiles) {}

  std::string name() const override { return "trig"; }
  double split_y() const override { return split_; }

  PhaseSample phase(const Vec2& x, double t) const override {
    const double g = profiles_.phi.value(t);
    const double cx = std::cos(kPi * x.x()), sx = std::sin(kPi * x.x());
    const double cy = std::cos(kPi * x.y()), sy = std::sin(kPi * x.y());
    PhaseSample s;
    s.phi = g * cx * cy;
    s.phi_t = profiles_.phi.derivative(t) * cx * cy;
    s.grad_phi = Vec2(-kPi * g * sx * cy, -kPi * g * cx * sy);
    s.lap_phi = -2.0 * kPi * kPi * s.phi;
    const double e = epsilon_;
    const double p = s.phi;
    s.mu = gamma_ * ((p * p * p - p) / e + 2.0 * kPi * kPi * e * p);
    const double d1 = gamma_ * ((3.0 * p * p - 1.0) / e + 2.0 * kPi * kPi * e);
    const double d2 = 6.0 * gamma_ * p / e;
    s.grad_mu = d1 * s.grad_phi;
    s.lap_mu = d2 * s.grad_phi.squaredNorm() + d1 * s.lap_phi;
    return s;
  }

  FlowSample conduit(const Vec2& x, double t) const override {
    const double g = profiles_.u.value(t);
    const double gt = profiles_.u.derivative(t);
    const double s2 = std::pow(std::sin(kPi * x.x()), 2);
    const double s2x = std::sin(2.0 * kPi * x.x());
    const double c2x = std::cos(2.0 * kPi * x.x());
    const double w = 1.0 - x.y();
    FlowSample f;
    const Vec2 shape(-2.0 * s2 * w, -kPi * s2x * w * w);
    f.u = g * shape;
    f.u_t = gt * shape;
    f.grad_u << -2.0 * kPi * g * s2x * w, 2.0 * g * s2,
                -2.0 * kPi * kPi * g * c2x * w * w, 2.0 * kPi * g * s2x * w;
    f.lap_u = Vec2(-4.0 * kPi * kPi * g * c2x * w,
                   4.0 * kPi * kPi * kPi * g * s2x * w * w - 2.0 * kPi * g * s2x);
    pressure(x, t, f);
    return f;
  }

  FlowSample matrix(const Vec2& x, double t) const override {
    const double g = profiles_.u.value(t) * beta_;
    const double gt = profiles_.u.derivative(t) * beta_;
    const double s2 = std::pow(std::sin(kPi * x.x()), 2);
    const double s2x = std::sin(2.0 * kPi * x.x());
    const double c2x = std::cos(2.0 * kPi * x.x());
    const double y = x.y();
    FlowSample f;
    f.u = g * Vec2(s2, -kPi * s2x * y);
    f.u_t = gt * Vec2(s2, -kPi * s2x * y);
    f.grad_u << kPi * g * s2x, 0.0,
                -2.0 * kPi * kPi * g * c2x * y, -kPi * g * s2x;
    f.lap_u = Vec2(2.0 * kPi * kPi * g * c2x, 4.0 * kPi * kPi * kPi * g * s2x * y);
    pressure(x, t, f);
    return f;
  }

 private:
  void pressure(const Vec2& x, double t, FlowSample& f) const {
    const double g = profiles_.p.value(t);
    const double cx = std::cos(kPi * x.x()), sx = std::sin(kPi * x.x());
    const double cy = std::cos(kPi * x.y()), sy = std::sin(kPi * x.y());
    f.p = g * cx * cy;
    f.grad_p = Vec2(-kPi * g * sx * cy, -kPi * g * cx * sy);
  }

  double gamma_, epsilon_, split_, beta_;
  TrigProfiles profiles_;
};

class EquilibriumSolution final : public ExactSolution {
 public:
  explicit EquilibriumSolution(double split) : split_(split) {}
  std::string name() const override { return "equilibrium"; }
  double split_y() const override { return split_; }
  PhaseSample phase(const Vec2&, double) const override {
    PhaseSample s;
    s.phi = 1.0;
    return s;
  }
  FlowSample conduit(const Vec2&, double) const override { return {}; }
  FlowSample matrix(const Vec2&, double) const override { return {}; }

 private:
  double split_;
};

}  // namespace

std::shared_ptr<const ExactSolution> make_trig_solution(const PhysParams& params, double split_y,
                                                         TrigProfiles profiles) {
  if (!(split_y > 0.0 && split_y < 1.0)) throw ValidationError("split_y", "must lie in (0, 1)");
  return std::make_shared<TrigSolution>(params.gamma, params.epsilon, split_y, profiles);
}

std::shared_ptr<const ExactSolution> make_equilibrium_solution(double split_y) {
  return std::make_shared<EquilibriumSolution>(split_y);
}

std::shared_ptr<const ExactSolution> make_exact_solution(const std::string& family, const PhysParams& params,
                                                         double split_y) {
  if (family == "trig") return make_trig_solution(params, split_y);
  if (family == "equilibrium") return make_equilibrium_solution(split_y);
  throw ValidationError("mms_family", "expected trig or equilibrium, got '" + family + "'");
}

ForcingTerms mms_forcing(std::shared_ptr<const ExactSolution> exact, const PhysParams& params) {
  ForcingTerms f;
  const PhysParams p = params;
  f.phase = [exact, p](const Vec2& x, double t) {
    const PhaseSample s = exact->phase(x, t);
    const FlowSample u = exact->flow(x, t);
    const double m = p.mobility(s.phi);
    const double dm = p.mobility.derivative(s.phi);
    return s.phi_t + u.u.dot(s.grad_phi) - (dm * s.grad_phi.dot(s.grad_mu) + m * s.lap_mu);
  };
  f.potential = [exact, p](const Vec2& x, double t) {
    const PhaseSample s = exact->phase(x, t);
    return p.gamma * (s.phi * s.phi * s.phi - s.phi) / p.epsilon - p.gamma * p.epsilon * s.lap_phi - s.mu;
  };
  f.conduit = [exact, p](const Vec2& x, double t) -> Vec2 {
    const PhaseSample s = exact->phase(x, t);
    const FlowSample u = exact->conduit(x, t);
    const double nu = p.viscosity(s.phi);
    const double dnu = p.viscosity.derivative(s.phi);
    const Mat2 d = 0.5 * (u.grad_u + u.grad_u.transpose());
    return p.rho0 * u.u_t - (nu * u.lap_u + 2.0 * dnu * d * s.grad_phi) + u.grad_p + s.phi * s.grad_mu;
  };
  f.matrix = [exact, p](const Vec2& x, double t) -> Vec2 {
    const PhaseSample s = exact->phase(x, t);
    const FlowSample u = exact->matrix(x, t);
    const double nu = p.viscosity(s.phi);
    return p.inertia(Region::Matrix) * u.u_t + nu * (p.permeability_inverse() * u.u) + u.grad_p +
           s.phi * s.grad_mu;
  };
  f.interface = [exact, p](const Vec2& x, double t) -> Vec2 {
    const Vec2 n(0.0, -1.0);
    const Vec2 tau(1.0, 0.0);
    const PhaseSample s = exact->phase(x, t);
    const FlowSample c = exact->conduit(x, t);
    const FlowSample m = exact->matrix(x, t);
    const double nu = p.viscosity(s.phi);
    const Mat2 d = 0.5 * (c.grad_u + c.grad_u.transpose());
    const double gn = 2.0 * nu * n.dot(d * n) - c.p + m.p;
    const double gt = 2.0 * nu * tau.dot(d * n) + p.friction_factor() * nu * tau.dot(c.u);
    return gn * n + gt * tau;
  };
  return f;
}

}  // namespace chsd
