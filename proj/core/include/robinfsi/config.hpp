#pragma once

#include <string>
#include <vector>

#include "robinfsi/fsi_common.hpp"

namespace robinfsi {

enum class Experiment {
  MmsFixed,
  MmsMoving,
  Convergence,
  CouplingErrors,
  Benchmark,
  MonolithicBenchmark,
  EnergyCheck,
};

const char* experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct PulseInflow {
  double p_max = 1.333e4;  // dyne/cm^2
  double t_max = 0.03;     // s
};

/// (p_max/2)(1 − cos(2πt/t_max)) while t ≤ t_max, 0 afterwards.
double pulse_pressure(double t, const PulseInflow& pulse);

struct MeshParams {
  double length = 1.0;
  double fluid_height = 0.5;
  double solid_height = 0.5;
  int nx = 10, ny_fluid = 5, ny_solid = 5;
};

struct OutputParams {
  std::string dir = "out";
  bool vtk = false;
  int vtk_every = 0;  // 0: final state only (when vtk is on)
  int profile_stations = 100;
  std::vector<double> profile_times;  // s
};

struct StudyParams {
  std::vector<double> alphas{1.0, 10.0, 100.0, 200.0, 500.0};
  int levels = 4;
  double base_dt = 0.01;
  int base_nx = 10, base_ny_fluid = 5, base_ny_solid = 5;
  int jobs = 2;
};

struct RunConfig {
  Experiment experiment = Experiment::Convergence;
  std::string preset;
  unsigned seed = 0;
  MaterialParams material;
  SchemeConfig scheme;
  MeshParams mesh;
  PulseInflow pulse;
  OutputParams output;
  StudyParams study;
};

/// TOML-style sections and key = value lines; unknown keys are rejected.
RunConfig parse_config_text(const std::string& text, const std::string& name);
RunConfig parse_config(const std::string& path);
std::string serialize_config(const RunConfig& c);

void apply_preset(RunConfig& c, const std::string& preset);
void validate_config(const RunConfig& c);

}  // namespace robinfsi
