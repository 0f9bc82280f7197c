#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chsd/analysis.hpp"
#include "chsd/ch_step.hpp"
#include "chsd/config.hpp"
#include "chsd/fields.hpp"
#include "chsd/mms.hpp"
#include "chsd/stokes_darcy.hpp"

namespace chsd {

struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  EnergyReport energy;
  double mass = 0.0;
  int newton_iterations = 0;
  double newton_residual = 0.0;
  double linear_residual = 0.0;  // largest relative residual of the step's linear solves
  std::uint64_t ch_mu_checksum = 0;
  std::uint64_t fluid_mu_checksum = 0;
  bool conduit_multiplier = false;
};

struct Trajectory {
  double tau = 0.0;
  int steps = 0;
  std::vector<StepDiagnostics> diagnostics;
  std::vector<FieldSet> snapshots;
  FieldSet final_state;
  bool failed = false;
  int failed_step = -1;
  std::string failure;
};

/// Closed-form initial data. phi is Ritz-projected, so its gradient is needed.
struct InitialData {
  std::function<double(const Vec2&)> phi;
  std::function<Vec2(const Vec2&)> grad_phi;
  std::function<Vec2(const Vec2&)> u_c;
  std::function<Vec2(const Vec2&)> u_m;
};

/// Per-step driver: phase solve with the intermediate velocity, then the
/// coupled fluid solve with the new chemical potential.
class Scheme {
 public:
  Scheme(Discretization disc, const PhysParams& params, NewtonOptions newton = {},
         std::shared_ptr<const ExactSolution> exact = nullptr);
  Scheme(const Scheme&) = delete;
  Scheme& operator=(const Scheme&) = delete;

  const Discretization& discretization() const { return disc_; }
  const PhysParams& params() const { return params_; }
  const ForcingTerms* forcing() const { return forcing_ ? &*forcing_ : nullptr; }

  /// Throws ProjectionFailed.
  FieldSet initialize(const InitialData& data);
  /// Same, with the phase field given by its coefficients in Y_h.
  FieldSet initialize_nodal(const Vector& phi, const std::function<Vec2(const Vec2&)>& u_c = {},
                            const std::function<Vec2(const Vec2&)>& u_m = {});

  FieldSet step(const FieldSet& state, double tau, StepDiagnostics* diagnostics = nullptr);
  StepDiagnostics describe(const FieldSet& state) const;

 private:
  FluidState project_velocity(const std::function<Vec2(const Vec2&)>& u_c,
                              const std::function<Vec2(const Vec2&)>& u_m);

  Discretization disc_;
  PhysParams params_;
  std::optional<ForcingTerms> forcing_;
  ChSolver ch_;
  FluidSolver fluid_;
  double last_projection_residual_ = 0.0;
};

std::shared_ptr<const KarstMesh> build_mesh(const MeshSpec& spec);

/// Initial data named by the config (manufactured, spinodal, constant, equilibrium).
FieldSet initial_state(Scheme& scheme, const RunConfig& config,
                       std::shared_ptr<const ExactSolution> exact = nullptr);

using StepObserver = std::function<void(const FieldSet&, const StepDiagnostics&)>;

/// K steps of the scheme. A solver failure stops the run and is recorded in
/// the trajectory instead of being thrown. The observer sees every step,
/// saved or not, including step 0.
Trajectory run(const RunConfig& config, const StepObserver& observer = {});

}  // namespace chsd
