#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robinfsi/fsi_linear.hpp"
#include "robinfsi/fsi_moving.hpp"
#include "robinfsi/mms.hpp"

namespace robinfsi {

struct StudySpec {
  bool moving = false;        // fixed-domain or moving-domain solver
  double lambda_s = 1.0;
  std::vector<double> alphas{1.0, 10.0, 100.0, 200.0, 500.0};
  int levels = 4;
  double base_dt = 0.01;
  int base_nx = 10, base_ny_fluid = 5, base_ny_solid = 5;
  double t_end = 0.3;
  ElementChoice elements = ElementChoice::MiniP1;
  bool compute_coupling = false;  // e_ke / e_σ (coupling-error study)
  int jobs = 1;
};

struct StudyCell {
  double alpha = 0.0;
  int level = 0;
  double h = 0.0, dt = 0.0;
  double e_eta = 0.0, e_xi = 0.0, e_f = 0.0;
  double e_ke = 0.0, e_sigma = 0.0;
  bool ok = false;
  std::string error;
};

struct ConvergenceTable {
  StudySpec spec;
  std::vector<StudyCell> cells;  // alpha-major, level-minor

  const StudyCell& cell(double alpha, int level) const;
  /// log2(e_k / e_{k+1}) between consecutive levels for one alpha.
  std::vector<double> rates(double alpha, double StudyCell::*field) const;
  std::string to_text() const;
};

ConvergenceTable run_convergence_study(const StudySpec& spec);

/// Rates of a raw error sequence (for synthetic-injection checks).
std::vector<double> rates_from(const std::vector<double>& errors);

/// Least-squares slope of log2(e) against the level index.
double fitted_rate(const std::vector<double>& errors);

struct MmsErrors {
  double e_eta = 0.0, e_xi = 0.0, e_f = 0.0;
};

/// Relative errors at t_final per the verification definitions: e_η is a
/// ratio of squared S-norms; e_ξ and e_F are ratios of unsquared L2 norms.
MmsErrors mms_errors(const MmsProblem& pr, const FEFunction& eta,
                     const FEFunction& xi, const FEFunction& v,
                     const Mesh& fluid_final, double t_final);

/// Same formulas with a closure standing in for the numerical solution
/// (exercises the error plumbing; identical closures give exactly zero).
MmsErrors mms_errors_closures(const MmsProblem& pr, const SpaceTimeVec& num_eta,
                              const SpaceTimeMat& num_grad_eta,
                              const SpaceTimeVec& num_xi, const SpaceTimeVec& num_v,
                              const Mesh& solid_mesh, const Mesh& fluid_mesh,
                              double t_final);

/// Kinematic and dynamic coupling-condition errors (e_ke, e_σ) on Γ̂.
/// eta_f null on fixed domains.
std::pair<double, double> coupling_errors(const FsiSetup& setup,
                                          const FEFunction& v,
                                          const FEFunction& p,
                                          const FEFunction& xi,
                                          const FEFunction& eta,
                                          const FEFunction* eta_f,
                                          const Mesh& fluid_deformed,
                                          const MaterialParams& mat);

/// α = ρ_S H_S / Δt + β H_S Δt with β = E/(1−ν²)(4ρ₁² − 2(1−ν)ρ₂²).
/// Shipped for completeness; not recommended for this scheme.
double alpha_heuristic(double rho_s, double h_s, double dt, double youngs,
                       double nu, double rho1, double rho2);

struct TemporalOrderResult {
  std::vector<double> dts;
  std::vector<double> errors;  // energy-norm error vs the Δt/8 self-reference
  double rate = 0.0;           // fitted slope
};

/// Fixed-mesh Δt-halving study of the linearized scheme against a Δt/8
/// self-reference (isolates the temporal splitting error).
TemporalOrderResult run_temporal_order_study(double alpha, int nx, int ny,
                                             double dt0, int n_dts,
                                             double t_end, double lambda_s);

}  // namespace robinfsi
