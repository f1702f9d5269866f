#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "robinfsi/assembly.hpp"
#include "robinfsi/fe_space.hpp"
#include "robinfsi/mesh.hpp"
#include "robinfsi/solve.hpp"

namespace robinfsi {

/// Per-time-level geometry snapshots of the fluid domain. η_F and w are P1
/// vector fields on the reference fluid mesh; the meshes share its
/// connectivity. J per element is the area ratio of the P1 map.
struct AleState {
  FEFunction eta_f;  // fluid domain displacement at t^{n}
  FEFunction w;      // domain velocity over (t^{n-1}, t^n]
  Mesh mesh_prev;    // Ω(t^{n-1})
  Mesh mesh_half;    // Ω(t^{n-1/2})
  Mesh mesh_curr;    // Ω(t^n)
  double min_j = 1.0, max_j = 1.0;
};

/// Harmonic (or forced) extension of interface displacement into the fluid
/// reference domain: −Δ η_F = f_D, η_F = data on Γ̂, η_F = 0 on the rest of
/// the boundary. The scalar Laplacian is factorized once.
class AleSolver {
public:
  explicit AleSolver(const Mesh& fluid_ref);

  const FESpace& space() const { return vec_space_; }        // P1 vector
  const Mesh& reference() const { return *ref_; }
  const std::vector<int>& interface_node_ids() const { return iface_nodes_; }

  /// interface_disp[k] is the displacement at interface_node_ids()[k].
  FEFunction extend(std::span<const Vec2> interface_disp,
                    const VectorField* f_d = nullptr) const;

private:
  const Mesh* ref_;
  FESpace scalar_space_;
  FESpace vec_space_;
  std::vector<int> iface_nodes_;
  DirichletSet dirichlet_;  // pattern only; values set per call
  SparseMatrix laplace_elim_;
  SparseMatrix laplace_orig_;
  std::unique_ptr<Factorization> fac_;
};

/// w = (η_F^{n+1} − η_F^n) / Δt (nodal).
FEFunction domain_velocity(const FEFunction& eta_new, const FEFunction& eta_old,
                           double dt);

/// Copy of v whose interface trace is replaced by w's (P2 midpoints get the
/// P1 edge average), so the ALE advecting field vanishes on Γ.
FEFunction interface_velocity_override(const FEFunction& v, const FEFunction& w);

/// |‖u‖²_{Ω_new} − ‖u‖²_{Ω_old} − Δt ∫_{Ω_half} |u|² ∇·w| / max(1, ‖u‖²_{Ω_new})
double gcl_check(const FEFunction& u, const Mesh& m_old, const Mesh& m_half,
                 const Mesh& m_new, const FEFunction& w, double dt);

/// Builds the three snapshots for one step from the new extension field;
/// enforces the element J range guard (TANGLED_MESH outside [j_min, j_max]).
AleState advance_geometry(const AleSolver& solver, const AleState& prev,
                          const FEFunction& eta_new, double dt,
                          double j_min = 0.5, double j_max = 1.5);

/// Initial snapshots from a given displacement (w = 0, all meshes equal).
AleState initial_geometry(const AleSolver& solver, const FEFunction& eta0,
                          double j_min = 0.5, double j_max = 1.5);

}  // namespace robinfsi
