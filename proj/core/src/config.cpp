#include "robinfsi/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "robinfsi/errors.hpp"
#include "robinfsi/io.hpp"

namespace robinfsi {

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::MmsFixed: return "mms-fixed";
    case Experiment::MmsMoving: return "mms-moving";
    case Experiment::Convergence: return "convergence";
    case Experiment::CouplingErrors: return "coupling-errors";
    case Experiment::Benchmark: return "benchmark";
    case Experiment::MonolithicBenchmark: return "monolithic-benchmark";
    case Experiment::EnergyCheck: return "energy-check";
  }
  return "?";
}

Experiment experiment_from_name(const std::string& name) {
  for (Experiment e :
       {Experiment::MmsFixed, Experiment::MmsMoving, Experiment::Convergence,
        Experiment::CouplingErrors, Experiment::Benchmark,
        Experiment::MonolithicBenchmark, Experiment::EnergyCheck})
    if (name == experiment_name(e)) return e;
  fail(ErrorCode::ValidationError, "unknown experiment '" + name + "'");
}

double pulse_pressure(double t, const PulseInflow& pulse) {
  if (t > pulse.t_max || t < 0.0) return 0.0;
  return 0.5 * pulse.p_max * (1.0 - std::cos(2.0 * M_PI * t / pulse.t_max));
}

namespace {

struct Entry {
  std::string section, key, value;
  int line;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void parse_fail(const std::string& name, int line,
                             const std::string& msg) {
  fail(ErrorCode::ParseError,
       name + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const Entry& e, const std::string& name) {
  const std::string v = strip_quotes(e.value);
  size_t used = 0;
  double out;
  try {
    out = std::stod(v, &used);
  } catch (...) {
    parse_fail(name, e.line, "expected a number for '" + e.key + "'");
  }
  if (used != v.size())
    parse_fail(name, e.line, "trailing characters in number for '" + e.key + "'");
  return out;
}

int to_int(const Entry& e, const std::string& name) {
  const double d = to_double(e, name);
  const int i = static_cast<int>(std::lround(d));
  if (d != i) parse_fail(name, e.line, "expected an integer for '" + e.key + "'");
  return i;
}

bool to_bool(const Entry& e, const std::string& name) {
  const std::string v = strip_quotes(e.value);
  if (v == "true") return true;
  if (v == "false") return false;
  parse_fail(name, e.line, "expected true/false for '" + e.key + "'");
}

std::vector<double> to_list(const Entry& e, const std::string& name) {
  std::string v = strip_quotes(e.value);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    size_t used = 0;
    try {
      out.push_back(std::stod(tok, &used));
    } catch (...) {
      parse_fail(name, e.line, "bad list entry '" + tok + "'");
    }
    if (used != tok.size())
      parse_fail(name, e.line, "bad list entry '" + tok + "'");
  }
  return out;
}

}  // namespace

void apply_preset(RunConfig& c, const std::string& preset) {
  if (preset == "example1" || preset == "example2") {
    c.material = MaterialParams{};  // unit parameters
    c.scheme = SchemeConfig{};
    c.scheme.io_noslip = true;
    c.scheme.clamp_solid_external = true;
    c.scheme.wall = WallBc::NoSlip;
    c.scheme.elements = ElementChoice::MiniP1;
    c.scheme.t_end = 0.3;
    c.scheme.convection = (preset == "example2");
    c.mesh = MeshParams{};
    c.study = StudyParams{};
    c.experiment = Experiment::Convergence;
  } else if (preset == "benchmark") {
    c.material.rho_f = 1.0;
    c.material.mu_f = 0.035;
    c.material.rho_s = 1.1;
    c.material.mu_s = 5.75e5;
    c.material.gamma = 4e6;
    c.material.lambda_s = 1.7e6;
    c.scheme.alpha = 100.0;
    c.scheme.dt = 1e-5;
    c.scheme.t_end = 0.012;
    c.scheme.elements = ElementChoice::MiniP1;
    c.scheme.bc = BcVariant::NeumannPressure;
    c.scheme.wall = WallBc::Symmetry;
    c.scheme.io_noslip = false;
    c.scheme.clamp_solid_external = false;
    c.scheme.convection = true;
    c.mesh.length = 6.0;
    c.mesh.fluid_height = 0.5;
    c.mesh.solid_height = 0.1;
    c.mesh.nx = 150;       // 2·150·25 = 7500 fluid elements
    c.mesh.ny_fluid = 25;
    c.mesh.ny_solid = 4;   // 2·150·4 = 1200 solid elements
    c.pulse = PulseInflow{};
    c.output.profile_times = {0.004, 0.008, 0.012};
    c.experiment = Experiment::Benchmark;
  } else {
    fail(ErrorCode::ValidationError, "unknown preset '" + preset + "'");
  }
  c.preset = preset;
}

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  std::vector<Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        parse_fail(name, lineno, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      parse_fail(name, lineno, "expected key = value");
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty() || e.value.empty())
      parse_fail(name, lineno, "expected key = value");
    entries.push_back(e);
  }

  RunConfig c;
  for (const auto& e : entries)
    if (e.section.empty() && e.key == "preset")
      apply_preset(c, strip_quotes(e.value));

  for (const auto& e : entries) {
    const std::string k = e.section.empty() ? e.key : e.section + "." + e.key;
    const std::string v = strip_quotes(e.value);
    if (k == "preset") {
      continue;
    } else if (k == "experiment") {
      c.experiment = experiment_from_name(v);
    } else if (k == "seed") {
      c.seed = static_cast<unsigned>(to_int(e, name));
    } else if (k == "material.rho_f") {
      c.material.rho_f = to_double(e, name);
    } else if (k == "material.mu_f") {
      c.material.mu_f = to_double(e, name);
    } else if (k == "material.rho_s") {
      c.material.rho_s = to_double(e, name);
    } else if (k == "material.mu_s") {
      c.material.mu_s = to_double(e, name);
    } else if (k == "material.lambda_s") {
      c.material.lambda_s = to_double(e, name);
    } else if (k == "material.gamma") {
      c.material.gamma = to_double(e, name);
    } else if (k == "scheme.alpha") {
      c.scheme.alpha = to_double(e, name);
    } else if (k == "scheme.dt") {
      c.scheme.dt = to_double(e, name);
    } else if (k == "scheme.t_end") {
      c.scheme.t_end = to_double(e, name);
    } else if (k == "scheme.elements") {
      if (v == "mini")
        c.scheme.elements = ElementChoice::MiniP1;
      else if (v == "th")
        c.scheme.elements = ElementChoice::TaylorHoodP2P1;
      else
        parse_fail(name, e.line, "elements must be mini|th");
    } else if (k == "scheme.bc") {
      if (v == "neumann")
        c.scheme.bc = BcVariant::NeumannPressure;
      else if (v == "dynamic")
        c.scheme.bc = BcVariant::DynamicPressure;
      else
        parse_fail(name, e.line, "bc must be neumann|dynamic");
    } else if (k == "scheme.wall") {
      if (v == "noslip")
        c.scheme.wall = WallBc::NoSlip;
      else if (v == "symmetry")
        c.scheme.wall = WallBc::Symmetry;
      else if (v == "neumann")
        c.scheme.wall = WallBc::Neumann;
      else
        parse_fail(name, e.line, "wall must be noslip|symmetry|neumann");
    } else if (k == "scheme.io_noslip") {
      c.scheme.io_noslip = to_bool(e, name);
    } else if (k == "scheme.clamp_solid_external") {
      c.scheme.clamp_solid_external = to_bool(e, name);
    } else if (k == "scheme.convection") {
      c.scheme.convection = to_bool(e, name);
    } else if (k == "scheme.c_ti_estimate") {
      c.scheme.c_ti_estimate = to_double(e, name);
    } else if (k == "mesh.length") {
      c.mesh.length = to_double(e, name);
    } else if (k == "mesh.fluid_height") {
      c.mesh.fluid_height = to_double(e, name);
    } else if (k == "mesh.solid_height") {
      c.mesh.solid_height = to_double(e, name);
    } else if (k == "mesh.nx") {
      c.mesh.nx = to_int(e, name);
    } else if (k == "mesh.ny_fluid") {
      c.mesh.ny_fluid = to_int(e, name);
    } else if (k == "mesh.ny_solid") {
      c.mesh.ny_solid = to_int(e, name);
    } else if (k == "pulse.p_max") {
      c.pulse.p_max = to_double(e, name);
    } else if (k == "pulse.t_max") {
      c.pulse.t_max = to_double(e, name);
    } else if (k == "output.dir") {
      c.output.dir = v;
    } else if (k == "output.vtk") {
      c.output.vtk = to_bool(e, name);
    } else if (k == "output.vtk_every") {
      c.output.vtk_every = to_int(e, name);
    } else if (k == "output.profile_stations") {
      c.output.profile_stations = to_int(e, name);
    } else if (k == "output.profile_times") {
      c.output.profile_times = to_list(e, name);
    } else if (k == "study.alphas") {
      c.study.alphas = to_list(e, name);
    } else if (k == "study.levels") {
      c.study.levels = to_int(e, name);
    } else if (k == "study.base_dt") {
      c.study.base_dt = to_double(e, name);
    } else if (k == "study.base_nx") {
      c.study.base_nx = to_int(e, name);
    } else if (k == "study.base_ny_fluid") {
      c.study.base_ny_fluid = to_int(e, name);
    } else if (k == "study.base_ny_solid") {
      c.study.base_ny_solid = to_int(e, name);
    } else if (k == "study.jobs") {
      c.study.jobs = to_int(e, name);
    } else {
      fail(ErrorCode::ValidationError,
           name + ":" + std::to_string(e.line) + ": unknown key '" + k + "'");
    }
  }

  validate_config(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::ParseError, "cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

void validate_config(const RunConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) fail(ErrorCode::ValidationError, msg);
  };
  require(c.material.rho_f > 0 && c.material.mu_f > 0 && c.material.rho_s > 0 &&
              c.material.mu_s > 0,
          "densities and viscosities must be positive");
  require(c.material.lambda_s >= 0 && c.material.gamma >= 0,
          "lambda_s and gamma must be non-negative");
  require(c.scheme.alpha > 0, "alpha must be positive");
  require(c.scheme.dt > 0, "dt must be positive");
  require(c.scheme.t_end >= c.scheme.dt, "t_end must be at least dt");
  require(c.mesh.length > 0 && c.mesh.fluid_height > 0 && c.mesh.solid_height > 0,
          "mesh dimensions must be positive");
  require(c.mesh.nx >= 1 && c.mesh.ny_fluid >= 1 && c.mesh.ny_solid >= 1,
          "mesh subdivisions must be >= 1");
  require(c.pulse.p_max >= 0, "p_max must be non-negative");
  require(c.pulse.t_max > 0, "t_max must be positive");
  require(c.study.levels >= 1, "study levels must be >= 1");
  require(!c.study.alphas.empty(), "study alphas must be non-empty");
  require(c.output.profile_stations > 0, "profile_stations must be positive");
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  auto d = [](double v) { return format_double(v); };
  os << "experiment = \"" << experiment_name(c.experiment) << "\"\n";
  os << "seed = " << c.seed << "\n\n";
  os << "[material]\n";
  os << "rho_f = " << d(c.material.rho_f) << "\n";
  os << "mu_f = " << d(c.material.mu_f) << "\n";
  os << "rho_s = " << d(c.material.rho_s) << "\n";
  os << "mu_s = " << d(c.material.mu_s) << "\n";
  os << "lambda_s = " << d(c.material.lambda_s) << "\n";
  os << "gamma = " << d(c.material.gamma) << "\n\n";
  os << "[scheme]\n";
  os << "alpha = " << d(c.scheme.alpha) << "\n";
  os << "dt = " << d(c.scheme.dt) << "\n";
  os << "t_end = " << d(c.scheme.t_end) << "\n";
  os << "elements = \""
     << (c.scheme.elements == ElementChoice::MiniP1 ? "mini" : "th") << "\"\n";
  os << "bc = \"" << (c.scheme.bc == BcVariant::NeumannPressure ? "neumann" : "dynamic")
     << "\"\n";
  os << "wall = \""
     << (c.scheme.wall == WallBc::NoSlip
             ? "noslip"
             : (c.scheme.wall == WallBc::Symmetry ? "symmetry" : "neumann"))
     << "\"\n";
  os << "io_noslip = " << (c.scheme.io_noslip ? "true" : "false") << "\n";
  os << "clamp_solid_external = "
     << (c.scheme.clamp_solid_external ? "true" : "false") << "\n";
  os << "convection = " << (c.scheme.convection ? "true" : "false") << "\n";
  os << "c_ti_estimate = " << d(c.scheme.c_ti_estimate) << "\n\n";
  os << "[mesh]\n";
  os << "length = " << d(c.mesh.length) << "\n";
  os << "fluid_height = " << d(c.mesh.fluid_height) << "\n";
  os << "solid_height = " << d(c.mesh.solid_height) << "\n";
  os << "nx = " << c.mesh.nx << "\n";
  os << "ny_fluid = " << c.mesh.ny_fluid << "\n";
  os << "ny_solid = " << c.mesh.ny_solid << "\n\n";
  os << "[pulse]\n";
  os << "p_max = " << d(c.pulse.p_max) << "\n";
  os << "t_max = " << d(c.pulse.t_max) << "\n\n";
  os << "[output]\n";
  os << "dir = \"" << c.output.dir << "\"\n";
  os << "vtk = " << (c.output.vtk ? "true" : "false") << "\n";
  os << "vtk_every = " << c.output.vtk_every << "\n";
  os << "profile_stations = " << c.output.profile_stations << "\n";
  os << "profile_times = \"";
  for (size_t i = 0; i < c.output.profile_times.size(); ++i)
    os << (i ? "," : "") << d(c.output.profile_times[i]);
  os << "\"\n\n";
  os << "[study]\n";
  os << "alphas = \"";
  for (size_t i = 0; i < c.study.alphas.size(); ++i)
    os << (i ? "," : "") << d(c.study.alphas[i]);
  os << "\"\n";
  os << "levels = " << c.study.levels << "\n";
  os << "base_dt = " << d(c.study.base_dt) << "\n";
  os << "base_nx = " << c.study.base_nx << "\n";
  os << "base_ny_fluid = " << c.study.base_ny_fluid << "\n";
  os << "base_ny_solid = " << c.study.base_ny_solid << "\n";
  os << "jobs = " << c.study.jobs << "\n";
  return os.str();
}

}  // namespace robinfsi
