// Command-line front end: run, converge, energy-audit, mesh-dump.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chsd/config.hpp"
#include "chsd/convergence.hpp"
#include "chsd/errors.hpp"
#include "chsd/output.hpp"
#include "chsd/scheme.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAudit = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

chsd::RunConfig load(const std::string& path) {
  chsd::RunConfig config = chsd::load_config(path);
  chsd::apply_environment(config);
  chsd::ensure_directory(config.output_dir);
  return config;
}

std::string join(const std::string& dir, const std::string& name) { return dir + "/" + name; }

int cmd_run(const std::string& path) {
  const chsd::RunConfig config = load(path);
  const chsd::Trajectory traj = chsd::run(config);
  chsd::write_timeseries_csv(join(config.output_dir, "timeseries.csv"), traj);
  if (config.write_vtk) {
    for (const chsd::FieldSet& s : traj.snapshots) {
      chsd::write_vtk(join(config.output_dir, "state_" + std::to_string(s.step) + ".vtk"), s);
    }
    chsd::write_vtk(join(config.output_dir, "final.vtk"), traj.final_state);
  }
  const auto& last = traj.diagnostics.back();
  std::printf("steps %d  energy %.10e  mass %.10e\n", traj.final_state.step, last.energy.total, last.mass);
  if (traj.failed) {
    std::fprintf(stderr, "solver failure at step %d: %s\n", traj.failed_step, traj.failure.c_str());
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_converge(const std::string& path, const std::string& ladder_name, int levels) {
  const chsd::RunConfig config = load(path);
  chsd::LadderSpec ladder;
  ladder.kind = chsd::parse_ladder_kind(ladder_name);
  ladder.levels = levels;
  const chsd::ErrorTable table = chsd::convergence_study(config, ladder);
  chsd::write_error_table_csv(join(config.output_dir, "errors_" + ladder_name + ".csv"), table);
  chsd::write_error_table_csv(std::cout, table);
  for (const auto& l : table.levels) {
    if (l.failed) {
      std::fprintf(stderr, "level %d failed: %s\n", l.level, l.failure.c_str());
      return kExitSolver;
    }
  }
  return kExitOk;
}

std::vector<double> parse_taus(const std::string& list) {
  std::vector<double> taus;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string item = list.substr(start, comma - start);
    std::size_t used = 0;
    double tau = 0.0;
    try {
      tau = std::stod(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != item.size() || item.empty() || !(tau > 0.0) || !std::isfinite(tau)) {
      throw chsd::ValidationError("taus", "expected a comma-separated list of positive numbers");
    }
    taus.push_back(tau);
    start = comma + 1;
  }
  return taus;
}

int cmd_energy_audit(const std::string& path, const std::string& tau_list) {
  chsd::RunConfig config = load(path);
  const std::vector<double> taus = parse_taus(tau_list);
  config.time.save_every = 1;
  config.write_vtk = false;
  int status = kExitOk;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    config.time.tau = taus[i];
    const chsd::Trajectory traj = chsd::run(config);
    chsd::write_timeseries_csv(join(config.output_dir, "energy_tau" + std::to_string(i) + ".csv"), traj);
    const auto& d = traj.diagnostics;
    const double e0 = d.front().energy.total;
    int violations = 0;
    double worst_increase = 0.0;
    double mass_drift = 0.0;
    int max_newton = 0;
    for (std::size_t k = 1; k < d.size(); ++k) {
      const double increase = d[k].energy.total - d[k - 1].energy.total;
      worst_increase = std::max(worst_increase, increase);
      if (increase > 1e-12 * e0) ++violations;
      mass_drift = std::max(mass_drift, std::abs(d[k].mass - d[0].mass));
      max_newton = std::max(max_newton, d[k].newton_iterations);
    }
    const bool ok = violations == 0 && mass_drift <= 1e-10 && !traj.failed;
    std::printf("tau %-10g steps %4d  violations %d  max_increase %.3e  mass_drift %.3e  newton_max %d  %s\n",
                taus[i], traj.final_state.step, violations, worst_increase, mass_drift, max_newton,
                ok ? "ok" : "VIOLATION");
    if (traj.failed) {
      std::fprintf(stderr, "solver failure at step %d: %s\n", traj.failed_step, traj.failure.c_str());
      return kExitSolver;
    }
    if (!ok) status = kExitAudit;
  }
  return status;
}

int cmd_mesh_dump(const std::string& path) {
  const chsd::RunConfig config = load(path);
  const auto mesh = chsd::build_mesh(config.mesh);
  const std::string out_path = join(config.output_dir, "mesh.txt");
  std::ofstream out(out_path);
  if (!out) throw chsd::IoError("cannot open " + out_path + " for writing");
  chsd::write_mesh_dump(out, *mesh);
  if (!out) throw chsd::IoError("failed writing " + out_path);
  std::printf("vertices %d  triangles %d  edges %d  interface edges %zu\n", mesh->num_vertices(),
              mesh->num_triangles(), mesh->num_edges(), mesh->interface_edges().size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cahn-Hilliard / Stokes-Darcy simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "time-step a configuration and write timeseries.csv");
  run->add_option("config", config_path, "config file")->required();

  std::string ladder = "temporal";
  int levels = 4;
  auto* converge = app.add_subcommand("converge", "manufactured-solution convergence ladder");
  converge->add_option("config", config_path, "config file")->required();
  converge->add_option("--ladder", ladder, "temporal or spatial")->check(CLI::IsMember({"temporal", "spatial"}));
  converge->add_option("--levels", levels, "number of refinement levels")->check(CLI::Range(1, 8));

  std::string taus = "0.001,0.01,0.1";
  auto* audit = app.add_subcommand("energy-audit", "check energy decay and mass conservation for several tau");
  audit->add_option("config", config_path, "config file")->required();
  audit->add_option("--taus", taus, "comma-separated time steps");

  auto* dump = app.add_subcommand("mesh-dump", "write the mesh of a configuration as text");
  dump->add_option("config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (converge->parsed()) return cmd_converge(config_path, ladder, levels);
    if (audit->parsed()) return cmd_energy_audit(config_path, taus);
    if (dump->parsed()) return cmd_mesh_dump(config_path);
  } catch (const chsd::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const chsd::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const chsd::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolver;
  }
  return kExitOk;
}
