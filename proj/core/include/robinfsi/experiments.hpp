#pragma once

#include <string>

#include "robinfsi/config.hpp"
#include "robinfsi/fsi_moving.hpp"

namespace robinfsi {

/// Cross-section profiles sampled on uniformly spaced x-stations:
/// flowrate Q(x) = ∫ v_x dy, mean pressure, and the vertical interface
/// displacement η_y(x) at the reference interface height.
struct Profiles {
  std::vector<double> x;
  std::vector<double> flowrate;
  std::vector<double> mean_pressure;
  std::vector<double> eta_y;
};

Profiles extract_profiles(const FEFunction& v, const FEFunction& p,
                          const FEFunction& eta, const FsiSetup& setup,
                          const Mesh& fluid_deformed, const MeshParams& mesh,
                          int stations);

/// Zero-data stability run from a fixed nonzero initial state under
/// homogeneous dynamic-pressure conditions; returns the energy log.
EnergyLog energy_check_run(double alpha, double dt, double t_end, int nx,
                           int ny_fluid, int ny_solid);

/// Dispatches one experiment; writes artifacts (CSV, gnuplot data, optional
/// VTK, JSON run summary) into the configured output directory.
int run(const RunConfig& config);

}  // namespace robinfsi
