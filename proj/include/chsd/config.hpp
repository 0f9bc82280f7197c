#pragma once

#include <cstdint>
#include <string>

#include "chsd/fe_space.hpp"
#include "chsd/params.hpp"

namespace chsd {

struct MeshSpec {
  int nx = 32;
  int ny = 32;
  double split_y = 0.5;
  Box bbox;
  int refinements = 0;
};

struct TimeSpec {
  double tau = 0.01;
  int steps = 100;
  int save_every = 1;
  int snapshot_every = 0;  // 0: VTK of the final state only
};

struct SolverSpec {
  double newton_tolerance = 1e-10;
  int newton_max_iterations = 50;
  int newton_max_halvings = 8;
};

/// Everything a run needs. Parsed from `key = value` text; see README for
/// the key table and defaults.
struct RunConfig {
  MeshSpec mesh;
  TimeSpec time;
  PhysParams params;
  Family phase_family = Family::P1;
  std::string initial_condition = "spinodal";  // spinodal | constant | equilibrium
  double ic_value = 0.0;
  double noise_amplitude = 0.05;
  std::uint64_t seed = 1;
  bool mms = false;
  std::string mms_family = "trig";
  std::string output_dir = "out";
  bool write_vtk = false;
  SolverSpec solver;

  /// Throws ValidationError.
  void validate() const;
  bool operator==(const RunConfig& other) const;
};

/// Throws ParseError for malformed lines, unknown or repeated keys, and
/// ValidationError for out-of-range values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// Replaces output_dir with $CHSD_OUT when that variable is set and nonempty.
void apply_environment(RunConfig& config);

}  // namespace chsd
