#include "chsd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "chsd/errors.hpp"

namespace chsd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  // Returns false when the text is not a valid value of the field's type.
  std::function<bool(RunConfig&, const std::string&)> set;
};

Field real(const std::string& key, double RunConfig::*member) {
  return {key, [member](const RunConfig& c) { return format_double(c.*member); },
          [member](RunConfig& c, const std::string& v) { return parse_number(v, c.*member); }};
}

Field real_at(const std::string& key, std::function<double&(RunConfig&)> ref) {
  return {key, [ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, const std::string& v) { return parse_number(v, ref(c)); }};
}

Field integer_at(const std::string& key, std::function<int&(RunConfig&)> ref) {
  return {key, [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, const std::string& v) { return parse_number(v, ref(c)); }};
}

Field text_at(const std::string& key, std::function<std::string&(RunConfig&)> ref) {
  return {key, [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); },
          [ref](RunConfig& c, const std::string& v) {
            ref(c) = v;
            return true;
          }};
}

Field flag_at(const std::string& key, std::function<bool&(RunConfig&)> ref) {
  return {key, [ref](const RunConfig& c) { return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false"); },
          [ref](RunConfig& c, const std::string& v) {
            if (v != "true" && v != "false") return false;
            ref(c) = v == "true";
            return true;
          }};
}

Field law_at(const std::string& key, std::function<MaterialLaw&(RunConfig&)> ref) {
  return {key, [ref](const RunConfig& c) { return to_string(ref(const_cast<RunConfig&>(c)).kind); },
          [ref](RunConfig& c, const std::string& v) {
            if (v == "constant") {
              ref(c).kind = LawKind::Constant;
            } else if (v == "clamped_quadratic") {
              ref(c).kind = LawKind::ClampedQuadratic;
            } else {
              return false;
            }
            return true;
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      integer_at("nx", [](RunConfig& c) -> int& { return c.mesh.nx; }),
      integer_at("ny", [](RunConfig& c) -> int& { return c.mesh.ny; }),
      real_at("split_y", [](RunConfig& c) -> double& { return c.mesh.split_y; }),
      real_at("x0", [](RunConfig& c) -> double& { return c.mesh.bbox.x0; }),
      real_at("y0", [](RunConfig& c) -> double& { return c.mesh.bbox.y0; }),
      real_at("x1", [](RunConfig& c) -> double& { return c.mesh.bbox.x1; }),
      real_at("y1", [](RunConfig& c) -> double& { return c.mesh.bbox.y1; }),
      integer_at("refinements", [](RunConfig& c) -> int& { return c.mesh.refinements; }),
      real_at("tau", [](RunConfig& c) -> double& { return c.time.tau; }),
      integer_at("steps", [](RunConfig& c) -> int& { return c.time.steps; }),
      integer_at("save_every", [](RunConfig& c) -> int& { return c.time.save_every; }),
      integer_at("snapshot_every", [](RunConfig& c) -> int& { return c.time.snapshot_every; }),
      real_at("rho0", [](RunConfig& c) -> double& { return c.params.rho0; }),
      real_at("chi", [](RunConfig& c) -> double& { return c.params.chi; }),
      real_at("gamma", [](RunConfig& c) -> double& { return c.params.gamma; }),
      real_at("epsilon", [](RunConfig& c) -> double& { return c.params.epsilon; }),
      real_at("alpha_bjsj", [](RunConfig& c) -> double& { return c.params.alpha_bjsj; }),
      real_at("permeability_xx", [](RunConfig& c) -> double& { return c.params.permeability(0, 0); }),
      {"permeability_xy",
       [](const RunConfig& c) { return format_double(c.params.permeability(0, 1)); },
       [](RunConfig& c, const std::string& v) {
         double x;
         if (!parse_number(v, x)) return false;
         c.params.permeability(0, 1) = c.params.permeability(1, 0) = x;
         return true;
       }},
      real_at("permeability_yy", [](RunConfig& c) -> double& { return c.params.permeability(1, 1); }),
      law_at("mobility_law", [](RunConfig& c) -> MaterialLaw& { return c.params.mobility; }),
      real_at("mobility_low", [](RunConfig& c) -> double& { return c.params.mobility.low; }),
      real_at("mobility_high", [](RunConfig& c) -> double& { return c.params.mobility.high; }),
      law_at("viscosity_law", [](RunConfig& c) -> MaterialLaw& { return c.params.viscosity; }),
      real_at("viscosity_low", [](RunConfig& c) -> double& { return c.params.viscosity.low; }),
      real_at("viscosity_high", [](RunConfig& c) -> double& { return c.params.viscosity.high; }),
      {"phase_degree",
       [](const RunConfig& c) { return std::string(c.phase_family == Family::P1 ? "1" : "2"); },
       [](RunConfig& c, const std::string& v) {
         if (v == "1") {
           c.phase_family = Family::P1;
         } else if (v == "2") {
           c.phase_family = Family::P2;
         } else {
           return false;
         }
         return true;
       }},
      text_at("initial_condition", [](RunConfig& c) -> std::string& { return c.initial_condition; }),
      real("ic_value", &RunConfig::ic_value),
      real("noise_amplitude", &RunConfig::noise_amplitude),
      {"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, const std::string& v) { return parse_number(v, c.seed); }},
      flag_at("mms", [](RunConfig& c) -> bool& { return c.mms; }),
      text_at("mms_family", [](RunConfig& c) -> std::string& { return c.mms_family; }),
      text_at("output_dir", [](RunConfig& c) -> std::string& { return c.output_dir; }),
      flag_at("write_vtk", [](RunConfig& c) -> bool& { return c.write_vtk; }),
      real_at("newton_tolerance", [](RunConfig& c) -> double& { return c.solver.newton_tolerance; }),
      integer_at("newton_max_iterations", [](RunConfig& c) -> int& { return c.solver.newton_max_iterations; }),
      integer_at("newton_max_halvings", [](RunConfig& c) -> int& { return c.solver.newton_max_halvings; }),
  };
  return table;
}

void require(bool ok, const char* key, const char* constraint) {
  if (!ok) throw ValidationError(key, constraint);
}

}  // namespace

void RunConfig::validate() const {
  require(mesh.nx >= 1, "nx", "must be at least 1");
  require(mesh.ny >= 2, "ny", "must be at least 2");
  require(mesh.split_y > 0.0 && mesh.split_y < 1.0, "split_y", "must lie strictly between 0 and 1");
  const double split_cells = mesh.split_y * mesh.ny;
  require(std::abs(split_cells - std::round(split_cells)) <= 1e-9 * mesh.ny, "split_y", "must fall on a grid line");
  require(mesh.bbox.width() > 0.0, "x1", "must exceed x0");
  require(mesh.bbox.height() > 0.0, "y1", "must exceed y0");
  require(mesh.refinements >= 0 && mesh.refinements <= 6, "refinements", "must lie in [0, 6]");
  require(std::isfinite(time.tau) && time.tau > 0.0, "tau", "must be positive");
  require(time.steps >= 0, "steps", "must be nonnegative");
  require(time.save_every >= 1, "save_every", "must be at least 1");
  require(time.snapshot_every >= 0, "snapshot_every", "must be nonnegative");
  params.validate();
  require(initial_condition == "spinodal" || initial_condition == "constant" || initial_condition == "equilibrium",
          "initial_condition", "must be spinodal, constant or equilibrium");
  require(std::isfinite(ic_value), "ic_value", "must be finite");
  require(std::isfinite(noise_amplitude) && noise_amplitude >= 0.0, "noise_amplitude", "must be nonnegative");
  require(mms_family == "trig" || mms_family == "equilibrium", "mms_family", "must be trig or equilibrium");
  if (mms) {
    require(mesh.bbox.x0 == 0.0 && mesh.bbox.y0 == 0.0 && mesh.bbox.x1 == 1.0 && mesh.bbox.y1 == 1.0, "mms",
            "manufactured solutions are defined on the unit square");
  }
  require(!output_dir.empty(), "output_dir", "must be nonempty");
  require(std::isfinite(solver.newton_tolerance) && solver.newton_tolerance > 0.0, "newton_tolerance",
          "must be positive");
  require(solver.newton_max_iterations >= 1, "newton_max_iterations", "must be at least 1");
  require(solver.newton_max_halvings >= 0, "newton_max_halvings", "must be nonnegative");
}

bool RunConfig::operator==(const RunConfig& other) const {
  for (const Field& f : fields()) {
    if (f.get(*this) != f.get(other)) return false;
  }
  return true;
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::map<std::string, const Field*> by_key;
  for (const Field& f : fields()) by_key[f.key] = &f;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "missing key");
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw ParseError(lineno, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(lineno, "key '" + key + "' given twice");
    if (value.empty()) throw ParseError(lineno, "missing value for '" + key + "'");
    if (!it->second->set(config, value)) throw ParseError(lineno, "invalid value '" + value + "' for '" + key + "'");
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(config) + "\n";
  return out;
}

void apply_environment(RunConfig& config) {
  const char* dir = std::getenv("CHSD_OUT");
  if (dir && *dir) config.output_dir = dir;
}

}  // namespace chsd
