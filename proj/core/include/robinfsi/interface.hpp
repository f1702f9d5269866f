#pragma once

#include <vector>

#include "robinfsi/assembly.hpp"
#include "robinfsi/fe_space.hpp"
#include "robinfsi/mesh.hpp"
#include "robinfsi/sparse.hpp"

namespace robinfsi {

/// Dof-level pairing of the conforming fluid/solid interface traces plus the
/// reference-interface mass matrices both sub-problems share. The trace
/// spaces must match along Γ̂ (P1/MINI vertices, or P2 vertices + midpoints).
struct InterfaceCoupling {
  std::vector<int> fluid_sdofs, solid_sdofs;  // paired scalar dofs
  std::vector<int> fluid_dofs, solid_dofs;    // component-expanded pairs
  SparseMatrix mg_fluid;  // boundary mass on Γ̂, fluid space dimensions
  SparseMatrix mg_solid;  // boundary mass on Γ̂, solid space dimensions

  /// y[solid_dofs[k]] += s * x[fluid_dofs[k]]
  void scatter_to_solid(std::span<const double> x, std::span<double> y,
                        double s = 1.0) const;
  void scatter_to_fluid(std::span<const double> x, std::span<double> y,
                        double s = 1.0) const;
};

InterfaceCoupling build_interface_coupling(const FESpace& fluid_v,
                                           const FESpace& solid_v,
                                           const InterfaceMap& imap);

/// Discrete interface traction functional φ ↦ ∫_Γ σ_F n_F · φ, stored as
/// dual values on the fluid velocity dofs (supported on the active
/// interface set; zero elsewhere).
struct TractionTrace {
  std::vector<double> dual;
  int level = 0;  // geometry snapshot tag (time level the recovery used)
};

/// Interface-restricted SPD mass solve (Riesz representative of a traction
/// functional) and the associated norms used by the energy diagnostics.
class InterfaceNorms {
public:
  InterfaceNorms() = default;
  /// active: fluid interface dofs that are unconstrained in the fluid system.
  InterfaceNorms(const InterfaceCoupling& ic, std::vector<int> active);

  const std::vector<int>& active() const { return active_; }
  /// ‖u‖²_{L²(Γ̂)} of a coefficient vector on fluid velocity dofs.
  double norm_sq(std::span<const double> coeffs) const;
  /// ‖λ‖²_{L²(Γ̂)} with λ = M⁻¹ T for a dual vector T.
  double dual_norm_sq(std::span<const double> dual) const;

private:
  std::vector<int> active_;
  std::vector<double> m_dense_;  // row-major active x active
  std::vector<double> chol_;     // Cholesky factor of m_dense_
  int n_ = 0;
};

}  // namespace robinfsi
