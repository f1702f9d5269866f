#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "robinfsi/fe_space.hpp"
#include "robinfsi/mesh.hpp"
#include "robinfsi/sparse.hpp"

namespace robinfsi {

using ScalarField = std::function<double(Vec2)>;
using VectorField = std::function<Vec2(Vec2)>;
using TensorField = std::function<Mat2(Vec2)>;

/// M_ij = density ∫ φ_j · φ_i over the snapshot geometry.
SparseMatrix assemble_mass(const FESpace& v, double density, const Mesh& geom);

/// 2 μ ∫ D(u):D(w) + λ ∫ (∇·u)(∇·w) + γ ∫ u·w on the space's own mesh.
SparseMatrix assemble_elasticity(const FESpace& v, double mu, double lambda,
                                 double gamma);

/// 2 μ ∫ D(u):D(w) on the snapshot geometry.
SparseMatrix assemble_fluid_viscous(const FESpace& v, double mu, const Mesh& geom);

/// B_kj = ∫ ψ_k (∇·φ_j); rows over the pressure space, cols over velocity.
SparseMatrix assemble_divergence(const FESpace& v, const FESpace& q,
                                 const Mesh& geom);

/// ρ ∫ [(a·∇)φ_j]·φ_i + (ρ/2) ∫ (∇·a_v − s)(φ_j·φ_i) with advecting field
/// a = a_v − w. The divergence correction uses only the velocity part a_v
/// (minus the prescribed mass source), which closes the discrete energy
/// identity on moving meshes; it vanishes on divergence-consistent fields.
SparseMatrix assemble_ale_convection(const FESpace& v, const Mesh& half_geom,
                                     double rho, const FEFunction& a_v,
                                     const FEFunction* w = nullptr,
                                     const ScalarField* mass_source = nullptr);

/// Boundary mass matrix over edges with the given tag (unit coefficient).
SparseMatrix assemble_boundary_mass(const FESpace& v, BoundaryTag tag,
                                    const Mesh& geom);

/// (ρ/2) ∫_{tagged} (v_n·n)(φ_j·φ_i) — the linearized dynamic-pressure
/// boundary operator.
SparseMatrix assemble_directional_boundary(const FESpace& v,
                                           std::initializer_list<BoundaryTag> tags,
                                           const Mesh& geom,
                                           const FEFunction& v_n, double rho);

/// load_i = −∫_{tagged} p(x) n·φ_i
std::vector<double> assemble_neumann_load(const FESpace& v, BoundaryTag tag,
                                          const ScalarField& pressure,
                                          const Mesh& geom);

/// ∫ f·φ_i over the snapshot geometry.
std::vector<double> assemble_vector_load(const FESpace& v, const Mesh& geom,
                                         const VectorField& f);

/// ∫ f ψ_i over the snapshot geometry.
std::vector<double> assemble_scalar_load(const FESpace& q, const Mesh& geom,
                                         const ScalarField& f);

/// ∫_{tagged} t(x)·φ_i — e.g. a prescribed interface traction density.
std::vector<double> assemble_boundary_vector_load(const FESpace& v,
                                                  BoundaryTag tag,
                                                  const Mesh& geom,
                                                  const VectorField& traction);

// ---------------------------------------------------------------------------
// Dirichlet constraints (homogeneous or inhomogeneous), applied by symmetric
// row/column elimination with right-hand-side correction.
// ---------------------------------------------------------------------------
class DirichletSet {
public:
  explicit DirichletSet(int n_dofs) : value_(n_dofs, 0.0), mask_(n_dofs, 0) {}
  void set(int dof, double value) {
    value_[dof] = value;
    mask_[dof] = 1;
  }
  bool constrained(int dof) const { return mask_[dof] != 0; }
  double value(int dof) const { return value_[dof]; }
  int size() const { return static_cast<int>(mask_.size()); }
  int count() const;
  void merge(const DirichletSet& other);
  /// Remap into a block system at the given dof offset.
  DirichletSet shifted(int offset, int total) const;

private:
  std::vector<double> value_;
  std::vector<char> mask_;
};

/// Boundary dofs of the tagged edges, restricted to the listed components.
void add_boundary_dirichlet(DirichletSet& set, const FESpace& v,
                            std::initializer_list<BoundaryTag> tags,
                            std::initializer_list<int> components,
                            double value = 0.0);

void apply_dirichlet(SparseMatrix& a, std::span<double> b,
                     const DirichletSet& set);
void apply_dirichlet_rhs_only(std::span<double> b, const DirichletSet& set);

// ---------------------------------------------------------------------------
// Stress evaluation
// ---------------------------------------------------------------------------
/// σ_F = −p I + 2 μ D(v) at element-local reference coordinates.
Mat2 fluid_stress(const FEFunction& v, const FEFunction& p, double mu,
                  const Mesh& geom, int tri, double r, double s);
/// σ_S = 2 μ D(η) + λ (∇·η) I on the solid reference mesh.
Mat2 solid_stress(const FEFunction& eta, double mu, double lambda, int tri,
                  double r, double s);

enum class InterfaceSide { Fluid, Solid };

struct PointwiseStressArgs {
  const FEFunction* v = nullptr;      // fluid velocity (Fluid side)
  const FEFunction* p = nullptr;      // fluid pressure (Fluid side)
  const FEFunction* eta = nullptr;    // solid displacement (Solid side)
  const Mesh* fluid_geom = nullptr;
  double mu_f = 0.0, mu_s = 0.0, lambda_s = 0.0;
};

/// Traction σ n at a point on the tagged interface, with n the outward
/// fluid normal. Throws POINT_NOT_ON_INTERFACE when the point is not on Γ.
Vec2 pointwise_stress(const PointwiseStressArgs& args, Vec2 point,
                      InterfaceSide side);

}  // namespace robinfsi
