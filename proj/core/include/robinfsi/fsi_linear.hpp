#pragma once

#include <memory>

#include "robinfsi/fsi_common.hpp"

namespace robinfsi {

/// Fully discrete linearized scheme on fixed domains: time-dependent Stokes
/// coupled to linear elastodynamics through the generalized Robin
/// transmission conditions, one structure solve then one fluid solve per
/// time level, traction lagged by one level.
struct LinearFsiState {
  FEFunction v, p, xi, eta;
  TractionTrace traction;
  double t = 0.0;
  int n = 0;
};

class LinearFsiSolver {
public:
  LinearFsiSolver(const Mesh& fluid, const Mesh& solid, const InterfaceMap& imap,
                  const MaterialParams& mat, const SchemeConfig& cfg,
                  Forcing forcing = {});

  const FsiSetup& setup() const { return setup_; }
  const SchemeConfig& config() const { return cfg_; }
  const MaterialParams& material() const { return mat_; }
  const StructureOperator& structure() const { return structure_; }
  const FluidOperator& fluid() const { return *fluid_; }

  LinearFsiState zero_state() const;
  /// Interpolated initial data plus (optionally) the interface traction of
  /// the initial fields as a closure on Γ̂.
  LinearFsiState initial_state(const VectorField& v0, const ScalarField& p0,
                               const VectorField& xi0, const VectorField& eta0,
                               const VectorField* traction0) const;

  /// ξ^{n+1} from the Robin structure sub-problem; η^{n+1} = η^n + Δt ξ^{n+1}.
  FEFunction structure_substep(const LinearFsiState& s) const;
  std::pair<FEFunction, FEFunction> fluid_substep(const LinearFsiState& s,
                                                  const FEFunction& xi_new) const;

  LinearFsiState step(const LinearFsiState& s, EnergyLog* log = nullptr) const;

  double mesh_h() const { return h_; }
  /// Δt ≤ ρ_F h/(α C_TI k²) — the sufficient condition of the convergence
  /// theory; violations are diagnostics, not errors.
  bool dt_condition_satisfied() const;

  EnergyRow energy_row(const LinearFsiState& s) const;

private:
  MaterialParams mat_;
  SchemeConfig cfg_;
  Forcing forcing_;
  FsiSetup setup_;
  StructureOperator structure_;
  std::unique_ptr<FluidOperator> fluid_;
  SparseMatrix mass_ref_;  // ρ_F mass on the (fixed) fluid mesh
  double h_ = 0.0;
};

/// Advances nsteps, optionally accumulating the energy log.
LinearFsiState run_linear(const LinearFsiSolver& solver, LinearFsiState state,
                          int nsteps, EnergyLog* log = nullptr);

}  // namespace robinfsi
