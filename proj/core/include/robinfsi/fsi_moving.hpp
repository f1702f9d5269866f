#pragma once

#include <memory>

#include "robinfsi/fsi_common.hpp"

namespace robinfsi {

/// Moving-domain partitioned scheme: Robin structure sub-problem with the
/// lagged ALE traction, harmonic-extension geometry sub-problem, then one
/// ALE fluid solve on the (t^n, t^{n+1/2}, t^{n+1}) mesh snapshots.
struct MovingFsiState {
  FEFunction v, p, xi, eta;
  TractionTrace traction;
  AleState ale;
  double t = 0.0;
  int n = 0;
};

class MovingFsiSolver {
public:
  MovingFsiSolver(const Mesh& fluid, const Mesh& solid, const InterfaceMap& imap,
                  const MaterialParams& mat, const SchemeConfig& cfg,
                  Forcing forcing = {});

  const FsiSetup& setup() const { return setup_; }
  const SchemeConfig& config() const { return cfg_; }
  const MaterialParams& material() const { return mat_; }
  const StructureOperator& structure() const { return structure_; }
  const AleSolver& ale_solver() const { return ale_; }

  MovingFsiState zero_state() const;
  /// Interpolated initial data; the fluid fields are sampled on the
  /// initially deformed domain built from η⁰'s harmonic extension.
  MovingFsiState initial_state(const VectorField& v0, const ScalarField& p0,
                               const VectorField& xi0, const VectorField& eta0,
                               const VectorField* traction0,
                               const VectorField* f_d0) const;

  FEFunction structure_substep(const MovingFsiState& s) const;
  /// Extension of the new interface displacement plus snapshot build.
  AleState geometry_substep(const MovingFsiState& s, const FEFunction& eta_new) const;

  MovingFsiState step(const MovingFsiState& s, EnergyLog* log = nullptr) const;

  double mesh_h() const { return h_; }
  bool dt_condition_satisfied() const;

  EnergyRow energy_row(const MovingFsiState& s) const;

private:
  MaterialParams mat_;
  SchemeConfig cfg_;
  Forcing forcing_;
  FsiSetup setup_;
  StructureOperator structure_;
  AleSolver ale_;
  double h_ = 0.0;
};

MovingFsiState run_moving(const MovingFsiSolver& solver, MovingFsiState state,
                          int nsteps, EnergyLog* log = nullptr);

}  // namespace robinfsi
