#pragma once

#include <array>
#include <string>
#include <vector>

#include "chsd/config.hpp"
#include "chsd/fields.hpp"
#include "chsd/mms.hpp"

namespace chsd {

enum class LadderKind { Temporal, Spatial };

std::string to_string(LadderKind kind);
/// Throws ValidationError on key "ladder".
LadderKind parse_ladder_kind(const std::string& name);

struct LadderSpec {
  LadderKind kind = LadderKind::Temporal;
  int levels = 4;
  double final_time = 0.5;
  int temporal_cells = 32;    // fixed mesh of the temporal ladder
  double coarse_tau = 0.1;    // halved per temporal level
  int coarse_cells = 8;       // doubled per spatial level
  double tau_per_h = 0.1;     // spatial ladder uses tau = tau_per_h * h
};

/// Error norms of one level. The first two are maxima over all time levels,
/// the last two are tau-weighted l2 sums over k = 1..K.
struct ErrorLevel {
  static constexpr int kColumns = 4;
  static constexpr std::array<const char*, kColumns> kNames = {"phi_grad_max", "u_max", "mu_grad_l2",
                                                               "sym_grad_uc_l2"};

  int level = 0;
  double h = 0.0;
  double tau = 0.0;
  int steps = 0;
  std::array<double, kColumns> errors{};
  int max_newton_iterations = 0;
  double max_linear_residual = 0.0;
  bool failed = false;
  std::string failure;
};

struct ErrorTable {
  LadderKind kind = LadderKind::Temporal;
  std::vector<ErrorLevel> levels;
  /// NaN when a column has fewer than three usable levels or a vanishing error.
  std::array<double, ErrorLevel::kColumns> slopes{};

  /// Least-squares slopes against tau (temporal) or h (spatial).
  void fit();
};

/// Least-squares slope of log(errors) against log(sizes). NaN for fewer than
/// three points or any error at or below 1e-10.
double fit_slope(const std::vector<double>& sizes, const std::vector<double>& errors);

/// Accumulates the error norms of a trajectory against an exact solution.
class ErrorAccumulator {
 public:
  ErrorAccumulator(std::shared_ptr<const ExactSolution> exact, double tau);
  void observe(const FieldSet& state);
  std::array<double, ErrorLevel::kColumns> errors() const;

 private:
  std::shared_ptr<const ExactSolution> exact_;
  double tau_;
  double phi_grad_max_ = 0.0;
  double u_max_ = 0.0;
  double mu_grad_sum_ = 0.0;
  double sym_grad_sum_ = 0.0;
};

/// Errors of the state at its own time: gradient of phi, velocity in both
/// regions, gradient of mu, symmetric gradient of the conduit velocity.
std::array<double, ErrorLevel::kColumns> state_errors(const FieldSet& state, const ExactSolution& exact);

/// The config supplies physics and MMS settings; the ladder overrides mesh
/// size, tau and step count. A failing level is marked and the rest still run.
ErrorTable convergence_study(const RunConfig& config, const LadderSpec& ladder);

/// Config of one ladder level.
RunConfig level_config(const RunConfig& config, const LadderSpec& ladder, int level);

}  // namespace chsd
