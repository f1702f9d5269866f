#pragma once

#include <functional>
#include <span>
#include <vector>

#include "robinfsi/mesh.hpp"
#include "robinfsi/vec.hpp"

namespace robinfsi {

enum class Family { P1, P1Bubble, P2 };

/// Affine map data of one triangle on a geometry snapshot.
struct ElementGeometry {
  Vec2 p0;
  Mat2 jac;      // columns p1-p0, p2-p0
  Mat2 jac_inv;
  double det = 0.0;  // = 2*area
  Vec2 map(double r, double s) const {
    return {p0.x + jac.xx * r + jac.xy * s, p0.y + jac.yx * r + jac.yy * s};
  }
  Vec2 phys_grad(const Vec2& ref_grad) const {
    // J^{-T} * ref_grad
    return {jac_inv.xx * ref_grad.x + jac_inv.yx * ref_grad.y,
            jac_inv.xy * ref_grad.x + jac_inv.yy * ref_grad.y};
  }
};

ElementGeometry element_geometry(const Mesh& geom, int tri);

/// Scalar-basis layout per element:
///   P1:       [v0 v1 v2]
///   P1Bubble: [v0 v1 v2 bubble]
///   P2:       [v0 v1 v2 e01 e12 e20]
/// Global scalar dofs: nodes first, then bubbles (one per element) or edge
/// midpoints. Vector dofs interleave components: dof = scalar*ncomp + comp.
class FESpace {
public:
  FESpace(const Mesh& mesh, Family family, int components);

  const Mesh& mesh() const { return *mesh_; }
  Family family() const { return family_; }
  int components() const { return components_; }
  int n_scalar_dofs() const { return n_scalar_; }
  int n_dofs() const { return n_scalar_ * components_; }
  int n_local() const;  // scalar basis functions per element

  int element_scalar_dof(int tri, int local) const;
  int dof(int scalar_dof, int comp) const { return scalar_dof * components_ + comp; }
  bool is_vertex_dof(int scalar_dof) const { return scalar_dof < mesh_->n_nodes(); }

  /// P2 midpoint scalar dof of the (unordered) mesh edge {a, b}.
  int edge_scalar_dof(int a, int b) const;

  /// Location of a scalar dof on a geometry snapshot (vertex, edge midpoint,
  /// or element centroid for bubbles).
  Vec2 scalar_dof_point(int scalar_dof, const Mesh& geom) const;

  void basis_values(double r, double s, std::span<double> out) const;
  void basis_ref_grads(double r, double s, std::span<Vec2> out) const;

  /// Quadrature degree the committed assembly rules use for this family.
  int assembly_degree() const { return family_ == Family::P1Bubble ? 6 : 4; }

private:
  const Mesh* mesh_;
  Family family_;
  int components_;
  int n_scalar_ = 0;
  std::vector<std::array<int, 3>> tri_edges_;  // P2: edge ids per element
  std::vector<std::array<int, 2>> edge_nodes_;  // P2: edge id -> node pair
};

struct FEFunction {
  const FESpace* space = nullptr;
  std::vector<double> coeffs;

  FEFunction() = default;
  explicit FEFunction(const FESpace& s) : space(&s), coeffs(s.n_dofs(), 0.0) {}

  double& operator[](size_t i) { return coeffs[i]; }
  double operator[](size_t i) const { return coeffs[i]; }
  int size() const { return static_cast<int>(coeffs.size()); }
};

// Nodal (plus edge-midpoint for P2) interpolation; bubble coefficients are 0.
FEFunction interpolate(const FESpace& v, const Mesh& geom,
                       const std::function<double(Vec2)>& f);
FEFunction interpolate(const FESpace& v, const Mesh& geom,
                       const std::function<Vec2(Vec2)>& f);

// Element-local evaluation at reference coordinates (r, s).
double eval_scalar(const FEFunction& f, int tri, double r, double s);
Vec2 eval_vector(const FEFunction& f, int tri, double r, double s);
Vec2 eval_scalar_grad(const FEFunction& f, const Mesh& geom, int tri, double r, double s);
Mat2 eval_vector_grad(const FEFunction& f, const Mesh& geom, int tri, double r, double s);

// Point evaluation via locator (geometry snapshot must match the locator's mesh).
double evaluate_scalar(const FEFunction& f, const PointLocator& loc, Vec2 p);
Vec2 evaluate_vector(const FEFunction& f, const PointLocator& loc, Vec2 p);

/// Nodal displacement view of a P1 vector field (for mesh deformation).
std::vector<Vec2> nodal_vectors(const FEFunction& f);

/// deform_mesh overload taking the displacement as a P1 vector field.
Mesh deform_mesh(const Mesh& mesh, const FEFunction& displacement,
                 double min_area_ratio = 1e-3);

}  // namespace robinfsi
