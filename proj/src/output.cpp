#include "chsd/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chsd/errors.hpp"

namespace chsd {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_timeseries_csv(std::ostream& out, const Trajectory& trajectory) {
  out << kTimeseriesHeader << '\n';
  for (const StepDiagnostics& d : trajectory.diagnostics) {
    out << d.step << ',' << format_real(d.time) << ',' << format_real(d.energy.total) << ','
        << format_real(d.energy.kinetic_conduit) << ',' << format_real(d.energy.kinetic_matrix) << ','
        << format_real(d.energy.interfacial) << ',' << format_real(d.energy.dissipation) << ','
        << format_real(d.mass) << ',' << d.newton_iterations << ',' << format_real(d.linear_residual) << '\n';
  }
}

void write_timeseries_csv(const std::string& path, const Trajectory& trajectory) {
  if (trajectory.diagnostics.empty()) throw IoError("trajectory has no saved steps");
  write_file(path, [&](std::ostream& out) { write_timeseries_csv(out, trajectory); });
}

std::vector<StepDiagnostics> read_timeseries_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTimeseriesHeader) throw IoError("timeseries header mismatch");
  std::vector<StepDiagnostics> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 10) throw IoError("timeseries row has " + std::to_string(cells.size()) + " fields");
    try {
      StepDiagnostics d;
      d.step = std::stoi(cells[0]);
      d.time = std::stod(cells[1]);
      d.energy.total = std::stod(cells[2]);
      d.energy.kinetic_conduit = std::stod(cells[3]);
      d.energy.kinetic_matrix = std::stod(cells[4]);
      d.energy.interfacial = std::stod(cells[5]);
      d.energy.dissipation = std::stod(cells[6]);
      d.mass = std::stod(cells[7]);
      d.newton_iterations = std::stoi(cells[8]);
      d.linear_residual = std::stod(cells[9]);
      rows.push_back(d);
    } catch (const std::logic_error&) {
      throw IoError("malformed timeseries row: " + line);
    }
  }
  return rows;
}

void write_error_table_csv(std::ostream& out, const ErrorTable& table) {
  out << "ladder,level,h,tau,steps";
  for (const char* name : ErrorLevel::kNames) out << ',' << name;
  out << ",max_newton_iters,max_linear_residual,failed\n";
  const std::string ladder = to_string(table.kind);
  for (const ErrorLevel& l : table.levels) {
    out << ladder << ',' << l.level << ',' << format_real(l.h) << ',' << format_real(l.tau) << ',' << l.steps;
    for (double e : l.errors) out << ',' << format_real(e);
    out << ',' << l.max_newton_iterations << ',' << format_real(l.max_linear_residual) << ','
        << (l.failed ? 1 : 0) << '\n';
  }
  out << ladder << ",slope,,,";
  for (double s : table.slopes) out << ',' << format_real(s);
  out << ",,,\n";
}

void write_error_table_csv(const std::string& path, const ErrorTable& table) {
  write_file(path, [&](std::ostream& out) { write_error_table_csv(out, table); });
}

void write_vtk(std::ostream& out, const FieldSet& state) {
  const KarstMesh& mesh = state.ch.phi.space().mesh();
  const int nv = mesh.num_vertices();
  std::vector<double> phi(nv, 0.0), mu(nv, 0.0), p(nv, 0.0);
  std::vector<Vec2> u(nv, Vec2::Zero());
  const std::array<Vec2, 3> corners = {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int i = 0; i < 3; ++i) {
      const int v = mesh.triangles()[t][i];
      phi[v] = state.ch.phi.value(t, corners[i]);
      mu[v] = state.ch.mu.value(t, corners[i]);
    }
  }
  // Matrix first so the conduit overwrites shared interface vertices.
  for (Region region : {Region::Matrix, Region::Conduit}) {
    const FeFunction& vel = region == Region::Conduit ? state.fluid.u_c : state.fluid.u_m;
    const FeFunction& pre = region == Region::Conduit ? state.fluid.p_c : state.fluid.p_m;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      if (mesh.region(t) != region) continue;
      for (int i = 0; i < 3; ++i) {
        const int v = mesh.triangles()[t][i];
        u[v] = vel.vector_value(t, corners[i]);
        p[v] = pre.value(t, corners[i]);
      }
    }
  }

  out << "# vtk DataFile Version 3.0\n";
  out << "chsd step " << state.step << " time " << format_real(state.time) << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const Vec2& x : mesh.vertices()) out << format_real(x.x()) << ' ' << format_real(x.y()) << " 0\n";
  const int nt = mesh.num_triangles();
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& tri : mesh.triangles()) out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) out << "5\n";
  out << "POINT_DATA " << nv << '\n';
  const auto scalars = [&](const char* name, const std::vector<double>& values) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) out << format_real(v) << '\n';
  };
  scalars("phi", phi);
  scalars("mu", mu);
  scalars("p", p);
  out << "VECTORS u double\n";
  for (const Vec2& w : u) out << format_real(w.x()) << ' ' << format_real(w.y()) << " 0\n";
}

void write_vtk(const std::string& path, const FieldSet& state) {
  write_file(path, [&](std::ostream& out) { write_vtk(out, state); });
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

}  // namespace chsd
