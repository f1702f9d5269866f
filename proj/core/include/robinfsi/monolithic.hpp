#pragma once

#include <vector>

#include "robinfsi/fsi_common.hpp"

namespace robinfsi {

/// Implicit, strongly coupled reference solver. Interface fluid-velocity and
/// solid-velocity dofs are identified (one unknown per interface node), so
/// the kinematic condition holds exactly and the interface tractions cancel
/// as internal forces. Geometry is semi-implicit: one Backward-Euler solve on
/// the level-n meshes, then the fluid domain is updated from the new
/// interface displacement.
struct MonolithicState {
  FEFunction v, p, xi, eta;
  AleState ale;
  double t = 0.0;
  int n = 0;
};

class MonolithicSolver {
public:
  MonolithicSolver(const Mesh& fluid, const Mesh& solid, const InterfaceMap& imap,
                   const MaterialParams& mat, const SchemeConfig& cfg,
                   Forcing forcing = {});

  const FsiSetup& setup() const { return setup_; }
  const SchemeConfig& config() const { return cfg_; }

  MonolithicState zero_state() const;
  MonolithicState step(const MonolithicState& s, EnergyLog* log = nullptr) const;

  /// max nodewise |v − ξ| over interface dofs (zero by construction).
  double interface_velocity_gap(const MonolithicState& s) const;

  EnergyRow energy_row(const MonolithicState& s) const;

private:
  MaterialParams mat_;
  SchemeConfig cfg_;
  Forcing forcing_;
  FsiSetup setup_;
  AleSolver ale_;
  SparseMatrix ms_, ks_;
  std::vector<int> solid_to_global_;
  int n_global_ = 0;
  DirichletSet global_bc_{0};
};

MonolithicState run_monolithic(const MonolithicSolver& solver,
                               MonolithicState state, int nsteps,
                               EnergyLog* log = nullptr);

}  // namespace robinfsi
