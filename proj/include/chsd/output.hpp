#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chsd/convergence.hpp"
#include "chsd/scheme.hpp"

namespace chsd {

inline constexpr const char* kTimeseriesHeader =
    "step,time,energy_total,energy_kin_c,energy_kin_m,energy_interfacial,dissipation,mass,newton_iters,residual";

/// Shortest decimal that still round-trips (17 significant digits).
std::string format_real(double v);

void write_timeseries_csv(std::ostream& out, const Trajectory& trajectory);
/// Throws IoError.
void write_timeseries_csv(const std::string& path, const Trajectory& trajectory);

/// Reads back the rows of a timeseries file. Checksums and the multiplier
/// flag are not part of the schema and stay at their defaults.
std::vector<StepDiagnostics> read_timeseries_csv(std::istream& in);

void write_error_table_csv(std::ostream& out, const ErrorTable& table);
void write_error_table_csv(const std::string& path, const ErrorTable& table);

/// Legacy ASCII VTK on the mesh vertices. Where both regions meet, p and u
/// take the conduit values.
void write_vtk(std::ostream& out, const FieldSet& state);
void write_vtk(const std::string& path, const FieldSet& state);

/// Creates the directory (and parents) if needed. Throws IoError.
void ensure_directory(const std::string& path);

}  // namespace chsd
