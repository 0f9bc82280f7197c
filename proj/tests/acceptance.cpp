// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "chsd/analysis.hpp"
#include "chsd/convergence.hpp"
#include "chsd/scheme.hpp"
#include "chsd/sparse.hpp"
#include "test_support.hpp"

namespace {

using namespace chsd;

constexpr double kSlopeLow = 0.85;
constexpr double kSlopeHigh = 1.15;
constexpr double kEnergySlack = 1e-12;
constexpr double kMassTolerance = 1e-10;
constexpr double kEquilibriumState = 1e-12;
constexpr double kEquilibriumEnergy = 1e-13;
constexpr double kOracleTolerance = 1e-9;
constexpr double kIdentityTolerance = 1e-12;
constexpr double kLinearResidual = 1e-10;
constexpr int kNewtonBudget = 25;

struct SolverTally {
  int max_newton = 0;
  double max_linear = 0.0;
  void add(int newton, double linear) {
    max_newton = std::max(max_newton, newton);
    max_linear = std::max(max_linear, linear);
  }
};

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

bool in_band(double s) { return s >= kSlopeLow && s <= kSlopeHigh; }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

RunConfig mms_config() {
  RunConfig c;
  c.mms = true;
  c.mms_family = "trig";
  c.params.epsilon = 0.5;
  return c;
}

void print_table(const ErrorTable& t) {
  for (const ErrorLevel& l : t.levels) {
    std::printf("  level %d h=%.5f tau=%.5f steps=%d  errors %.4e %.4e %.4e %.4e  newton<=%d res<=%.1e%s\n", l.level,
                l.h, l.tau, l.steps, l.errors[0], l.errors[1], l.errors[2], l.errors[3], l.max_newton_iterations,
                l.max_linear_residual, l.failed ? " FAILED" : "");
  }
  std::printf("  slopes %.4f %.4f %.4f %.4f\n", t.slopes[0], t.slopes[1], t.slopes[2], t.slopes[3]);
}

void tally_table(const ErrorTable& t, SolverTally& tally) {
  for (const ErrorLevel& l : t.levels) tally.add(l.max_newton_iterations, l.max_linear_residual);
}

void temporal_rate(SolverTally& tally) {
  RunConfig c = mms_config();
  c.phase_family = Family::P2;
  LadderSpec ladder;
  ladder.kind = LadderKind::Temporal;
  const ErrorTable t = convergence_study(c, ladder);
  print_table(t);
  tally_table(t, tally);
  const bool ok = in_band(t.slopes[0]) && in_band(t.slopes[1]);
  report(1, ok,
         "temporal slopes grad phi " + fmt("%.3f", t.slopes[0]) + ", u " + fmt("%.3f", t.slopes[1]) +
             " (band [0.85, 1.15])");
}

void spatial_rate(SolverTally& tally) {
  RunConfig c = mms_config();
  c.phase_family = Family::P1;
  LadderSpec ladder;
  ladder.kind = LadderKind::Spatial;
  const ErrorTable t = convergence_study(c, ladder);
  print_table(t);
  tally_table(t, tally);
  const bool ok = in_band(t.slopes[0]) && in_band(t.slopes[2]);
  report(2, ok,
         "spatial slopes grad phi " + fmt("%.3f", t.slopes[0]) + ", grad mu " + fmt("%.3f", t.slopes[2]) +
             " (band [0.85, 1.15])");
}

void energy_and_mass(SolverTally& tally) {
  bool energy_ok = true, mass_ok = true;
  std::string energy_detail, mass_detail;
  for (double tau : {1e-3, 1e-2, 1e-1}) {
    RunConfig c;
    c.initial_condition = "spinodal";
    c.ic_value = 0.0;
    c.noise_amplitude = 0.05;
    c.seed = 2024;
    c.time.tau = tau;
    c.time.steps = 200;
    c.time.save_every = 1;
    const Trajectory t = run(c, [&](const FieldSet&, const StepDiagnostics& d) {
      tally.add(d.newton_iterations, d.linear_residual);
    });
    const double e0 = t.diagnostics.front().energy.total;
    const double m0 = t.diagnostics.front().mass;
    int violations = 0;
    double worst_rise = -1e300, drift = 0.0;
    for (std::size_t k = 1; k < t.diagnostics.size(); ++k) {
      const double rise = t.diagnostics[k].energy.total - t.diagnostics[k - 1].energy.total;
      worst_rise = std::max(worst_rise, rise);
      if (rise > kEnergySlack * e0) ++violations;
      drift = std::max(drift, std::abs(t.diagnostics[k].mass - m0));
    }
    const bool complete = !t.failed && t.diagnostics.size() == 201;
    energy_ok = energy_ok && complete && violations == 0;
    mass_ok = mass_ok && complete && drift <= kMassTolerance;
    energy_detail += " tau=" + fmt("%g", tau) + ": E0 " + fmt("%.4e", e0) + " -> " +
                     fmt("%.4e", t.diagnostics.back().energy.total) + ", max rise " + fmt("%.2e", worst_rise) +
                     ", violations " + std::to_string(violations) + (complete ? "" : " (run failed)") + ";";
    mass_detail += " tau=" + fmt("%g", tau) + ": " + fmt("%.2e", drift) + ";";
  }
  report(3, energy_ok, "energy non-increasing over 200 steps." + energy_detail);
  report(4, mass_ok, "max mass drift (tol 1e-10)." + mass_detail);
}

void equilibrium(SolverTally& tally) {
  RunConfig c;
  c.initial_condition = "equilibrium";
  c.time.tau = 0.01;
  c.time.steps = 50;
  FieldSet initial;
  double change = 0.0, energy_max = 0.0;
  bool have_initial = false;
  const auto diff = [](const FeFunction& a, const FeFunction& b) {
    return (a.coefficients() - b.coefficients()).cwiseAbs().maxCoeff();
  };
  const Trajectory t = run(c, [&](const FieldSet& s, const StepDiagnostics& d) {
    if (!have_initial) {
      initial = s;
      have_initial = true;
    }
    change = std::max({change, diff(s.ch.phi, initial.ch.phi), diff(s.ch.mu, initial.ch.mu),
                       diff(s.fluid.u_c, initial.fluid.u_c), diff(s.fluid.u_m, initial.fluid.u_m),
                       diff(s.fluid.p_c, initial.fluid.p_c), diff(s.fluid.p_m, initial.fluid.p_m)});
    energy_max = std::max(energy_max, std::abs(d.energy.total));
    if (d.step > 0) tally.add(d.newton_iterations, d.linear_residual);
  });
  const bool ok = !t.failed && t.final_state.step == 50 && change <= kEquilibriumState &&
                  energy_max <= kEquilibriumEnergy;
  report(5, ok, "phi = 1, u = 0 over 50 steps: max change " + fmt("%.2e", change) + ", max |E| " +
                    fmt("%.2e", energy_max));
}

void oracle_step(SolverTally& tally) {
  using testing::from_oracle;
  using testing::max_abs_diff;
  using testing::to_oracle;
  double worst = 0.0;
  std::mt19937_64 rng(606);
  for (int variant = 0; variant < 2; ++variant) {
    const Discretization disc =
        Discretization::build(std::make_shared<const KarstMesh>(build_karst_mesh(2, 2, 0.5)), Family::P1);
    const oracle::Problem pb = oracle::make_problem(2, 2, 0.5, 1);
    PhysParams params;
    if (variant == 1) {
      params.rho0 = 1.3;
      params.chi = 0.4;
      params.gamma = 0.8;
      params.epsilon = 0.2;
      params.alpha_bjsj = 0.7;
      params.permeability << 2.0, 0.3, 0.3, 0.5;
      params.mobility = {LawKind::ClampedQuadratic, 0.02, 0.05};
      params.viscosity = {LawKind::ClampedQuadratic, 1.0, 1.8};
    }
    FieldSet state = FieldSet::zero(disc);
    state.ch.phi.coefficients() = testing::random_vector(rng, disc.phase->dof_count(), -0.5, 0.5);
    state.fluid.u_c.coefficients() = testing::random_vector(rng, disc.velocity_c->dof_count(), -0.5, 0.5);
    state.fluid.u_m.coefficients() = testing::random_vector(rng, disc.velocity_m->dof_count(), -0.5, 0.5);
    const double tau = 0.02;
    Scheme scheme(disc, params);
    StepDiagnostics d;
    const FieldSet next = scheme.step(state, tau, &d);
    tally.add(d.newton_iterations, d.linear_residual);

    const oracle::Params op = testing::to_oracle(params);
    const auto ch = oracle::ch_step(pb, op, tau, to_oracle(state.ch.phi, pb.phase), to_oracle(state.fluid, pb));
    const auto fl = oracle::fluid_step(pb, op, tau, to_oracle(state.ch.phi, pb.phase), ch.mu, to_oracle(state.fluid, pb));
    worst = std::max({worst, max_abs_diff(next.ch.phi.coefficients(), from_oracle(ch.phi, *disc.phase, pb.phase)),
                      max_abs_diff(next.ch.mu.coefficients(), from_oracle(ch.mu, *disc.phase, pb.phase)),
                      max_abs_diff(next.fluid.u_c.coefficients(), from_oracle(fl.u_c, *disc.velocity_c, pb.vel_c)),
                      max_abs_diff(next.fluid.p_c.coefficients(), from_oracle(fl.p_c, *disc.pressure_c, pb.pre_c)),
                      max_abs_diff(next.fluid.u_m.coefficients(), from_oracle(fl.u_m, *disc.velocity_m, pb.vel_m)),
                      max_abs_diff(next.fluid.p_m.coefficients(), from_oracle(fl.p_m, *disc.pressure_m, pb.pre_m))});
  }
  report(6, worst <= kOracleTolerance,
         "one full step vs dense oracle (default and variable parameters): max coefficient diff " +
             fmt("%.2e", worst));
}

void operator_identities() {
  const auto space = std::make_shared<const FeSpace>(std::make_shared<const KarstMesh>(build_karst_mesh(8, 8, 0.5)),
                                                     Domain::Whole, Family::P1, Arity::Scalar);
  const PhaseOperatorCache ops(space);
  std::mt19937_64 rng(707);
  double worst_norm = 0.0, worst_mean = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vector c = testing::random_vector(rng, space->dof_count(), -1.0, 1.0);
    const FeFunction v(space, c);
    worst_mean = std::max(worst_mean, std::abs(ops.mass_row().dot(discrete_laplacian(v, ops).coefficients())));
    c.array() -= ops.mass_row().dot(c);
    const FeFunction z(space, c);
    const FeFunction t = inverse_laplacian(z, ops);
    const double lhs = std::pow(neg_one_h_norm(z, ops), 2);
    const double rhs = z.coefficients().dot(ops.mass() * t.coefficients());
    worst_norm = std::max(worst_norm, std::abs(lhs - rhs) / rhs);
  }
  const bool ok = worst_norm <= kIdentityTolerance && worst_mean <= kIdentityTolerance;
  report(7, ok, "100 random fields: max rel |norm^2 - (z, T z)| " + fmt("%.2e", worst_norm) +
                    ", max |(Delta_h v, 1)| " + fmt("%.2e", worst_mean));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  reset_solve_statistics();
  SolverTally tally;

  temporal_rate(tally);
  spatial_rate(tally);
  energy_and_mass(tally);
  equilibrium(tally);
  oracle_step(tally);

  const SolveStatistics& stats = solve_statistics();
  const double linear = std::max(stats.max_residual, tally.max_linear);
  const bool newton_ok = tally.max_newton <= kNewtonBudget;
  const bool linear_ok = linear <= kLinearResidual;

  operator_identities();
  report(8, newton_ok && linear_ok,
         std::to_string(stats.solves) + " linear solves, max relative residual " + fmt("%.2e", linear) +
             "; max Newton iterations " + std::to_string(tally.max_newton) + " (limit 25)");

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("acceptance: %d failure(s), %.1f s\n", failures, seconds);
  return failures == 0 ? 0 : 1;
}
