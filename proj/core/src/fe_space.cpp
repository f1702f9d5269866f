#include "robinfsi/fe_space.hpp"

#include <map>

#include "robinfsi/errors.hpp"

namespace robinfsi {

ElementGeometry element_geometry(const Mesh& geom, int tri) {
  const auto& t = geom.tris[tri];
  ElementGeometry g;
  g.p0 = geom.nodes[t[0]];
  const Vec2 e1 = geom.nodes[t[1]] - g.p0;
  const Vec2 e2 = geom.nodes[t[2]] - g.p0;
  g.jac = {e1.x, e2.x, e1.y, e2.y};
  g.det = g.jac.det();
  g.jac_inv = inverse(g.jac);
  return g;
}

FESpace::FESpace(const Mesh& mesh, Family family, int components)
    : mesh_(&mesh), family_(family), components_(components) {
  if (components != 1 && components != 2)
    fail(ErrorCode::ValidationError, "components must be 1 or 2");
  switch (family) {
    case Family::P1:
      n_scalar_ = mesh.n_nodes();
      break;
    case Family::P1Bubble:
      n_scalar_ = mesh.n_nodes() + mesh.n_tris();
      break;
    case Family::P2: {
      std::map<std::pair<int, int>, int> edge_ids;
      tri_edges_.resize(mesh.n_tris());
      for (int t = 0; t < mesh.n_tris(); ++t) {
        const auto& tri = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
          const int a = tri[k], b = tri[(k + 1) % 3];
          const auto key = std::minmax(a, b);
          auto it = edge_ids.find(key);
          if (it == edge_ids.end()) {
            it = edge_ids.emplace(key, static_cast<int>(edge_nodes_.size())).first;
            edge_nodes_.push_back({key.first, key.second});
          }
          tri_edges_[t][k] = it->second;
        }
      }
      n_scalar_ = mesh.n_nodes() + static_cast<int>(edge_nodes_.size());
      break;
    }
  }
}

int FESpace::n_local() const {
  switch (family_) {
    case Family::P1: return 3;
    case Family::P1Bubble: return 4;
    case Family::P2: return 6;
  }
  return 0;
}

int FESpace::element_scalar_dof(int tri, int local) const {
  if (local < 3) return mesh_->tris[tri][local];
  if (family_ == Family::P1Bubble) return mesh_->n_nodes() + tri;
  return mesh_->n_nodes() + tri_edges_[tri][local - 3];
}

int FESpace::edge_scalar_dof(int a, int b) const {
  if (family_ != Family::P2)
    fail(ErrorCode::ValidationError, "edge dofs exist only for P2");
  const auto key = std::minmax(a, b);
  for (int t = 0; t < mesh_->n_tris(); ++t)
    for (int k = 0; k < 3; ++k) {
      const auto& tri = mesh_->tris[t];
      if (std::minmax(tri[k], tri[(k + 1) % 3]) == key)
        return mesh_->n_nodes() + tri_edges_[t][k];
    }
  fail(ErrorCode::ValidationError, "no such mesh edge");
}

Vec2 FESpace::scalar_dof_point(int s, const Mesh& geom) const {
  if (s < mesh_->n_nodes()) return geom.nodes[s];
  if (family_ == Family::P1Bubble) {
    const auto& t = geom.tris[s - mesh_->n_nodes()];
    return (1.0 / 3.0) * (geom.nodes[t[0]] + geom.nodes[t[1]] + geom.nodes[t[2]]);
  }
  const auto& e = edge_nodes_[s - mesh_->n_nodes()];
  return 0.5 * (geom.nodes[e[0]] + geom.nodes[e[1]]);
}

void FESpace::basis_values(double r, double s, std::span<double> out) const {
  const double l0 = 1.0 - r - s, l1 = r, l2 = s;
  switch (family_) {
    case Family::P1:
      out[0] = l0; out[1] = l1; out[2] = l2;
      break;
    case Family::P1Bubble:
      out[0] = l0; out[1] = l1; out[2] = l2;
      out[3] = 27.0 * l0 * l1 * l2;
      break;
    case Family::P2:
      out[0] = l0 * (2.0 * l0 - 1.0);
      out[1] = l1 * (2.0 * l1 - 1.0);
      out[2] = l2 * (2.0 * l2 - 1.0);
      out[3] = 4.0 * l0 * l1;
      out[4] = 4.0 * l1 * l2;
      out[5] = 4.0 * l2 * l0;
      break;
  }
}

void FESpace::basis_ref_grads(double r, double s, std::span<Vec2> out) const {
  const double l0 = 1.0 - r - s, l1 = r, l2 = s;
  // reference gradients of barycentrics: dl0 = (-1,-1), dl1 = (1,0), dl2 = (0,1)
  switch (family_) {
    case Family::P1:
      out[0] = {-1.0, -1.0}; out[1] = {1.0, 0.0}; out[2] = {0.0, 1.0};
      break;
    case Family::P1Bubble:
      out[0] = {-1.0, -1.0}; out[1] = {1.0, 0.0}; out[2] = {0.0, 1.0};
      out[3] = {27.0 * (l1 * l2 * (-1.0) + l0 * l2),
                27.0 * (l1 * l2 * (-1.0) + l0 * l1)};
      break;
    case Family::P2:
      out[0] = {-(4.0 * l0 - 1.0), -(4.0 * l0 - 1.0)};
      out[1] = {4.0 * l1 - 1.0, 0.0};
      out[2] = {0.0, 4.0 * l2 - 1.0};
      out[3] = {4.0 * (l0 - l1), -4.0 * l1};
      out[4] = {4.0 * l2, 4.0 * l1};
      out[5] = {-4.0 * l2, 4.0 * (l0 - l2)};
      break;
  }
}

FEFunction interpolate(const FESpace& v, const Mesh& geom,
                       const std::function<double(Vec2)>& f) {
  if (v.components() != 1)
    fail(ErrorCode::DimensionMismatch, "scalar interpolation on vector space");
  FEFunction out(v);
  for (int s = 0; s < v.n_scalar_dofs(); ++s) {
    if (v.family() == Family::P1Bubble && s >= v.mesh().n_nodes()) continue;
    out.coeffs[s] = f(v.scalar_dof_point(s, geom));
  }
  return out;
}

FEFunction interpolate(const FESpace& v, const Mesh& geom,
                       const std::function<Vec2(Vec2)>& f) {
  if (v.components() != 2)
    fail(ErrorCode::DimensionMismatch, "vector interpolation on scalar space");
  FEFunction out(v);
  for (int s = 0; s < v.n_scalar_dofs(); ++s) {
    if (v.family() == Family::P1Bubble && s >= v.mesh().n_nodes()) continue;
    const Vec2 val = f(v.scalar_dof_point(s, geom));
    out.coeffs[v.dof(s, 0)] = val.x;
    out.coeffs[v.dof(s, 1)] = val.y;
  }
  return out;
}

namespace {
constexpr int kMaxLocal = 6;
}

double eval_scalar(const FEFunction& f, int tri, double r, double s) {
  const FESpace& v = *f.space;
  double n[kMaxLocal];
  v.basis_values(r, s, {n, static_cast<size_t>(v.n_local())});
  double out = 0.0;
  for (int l = 0; l < v.n_local(); ++l)
    out += f.coeffs[v.element_scalar_dof(tri, l)] * n[l];
  return out;
}

Vec2 eval_vector(const FEFunction& f, int tri, double r, double s) {
  const FESpace& v = *f.space;
  double n[kMaxLocal];
  v.basis_values(r, s, {n, static_cast<size_t>(v.n_local())});
  Vec2 out;
  for (int l = 0; l < v.n_local(); ++l) {
    const int sd = v.element_scalar_dof(tri, l);
    out.x += f.coeffs[v.dof(sd, 0)] * n[l];
    out.y += f.coeffs[v.dof(sd, 1)] * n[l];
  }
  return out;
}

Vec2 eval_scalar_grad(const FEFunction& f, const Mesh& geom, int tri, double r,
                      double s) {
  const FESpace& v = *f.space;
  Vec2 g[kMaxLocal];
  v.basis_ref_grads(r, s, {g, static_cast<size_t>(v.n_local())});
  const ElementGeometry eg = element_geometry(geom, tri);
  Vec2 out;
  for (int l = 0; l < v.n_local(); ++l) {
    const Vec2 pg = eg.phys_grad(g[l]);
    out += f.coeffs[v.element_scalar_dof(tri, l)] * pg;
  }
  return out;
}

Mat2 eval_vector_grad(const FEFunction& f, const Mesh& geom, int tri, double r,
                      double s) {
  const FESpace& v = *f.space;
  Vec2 g[kMaxLocal];
  v.basis_ref_grads(r, s, {g, static_cast<size_t>(v.n_local())});
  const ElementGeometry eg = element_geometry(geom, tri);
  Mat2 out;
  for (int l = 0; l < v.n_local(); ++l) {
    const int sd = v.element_scalar_dof(tri, l);
    const Vec2 pg = eg.phys_grad(g[l]);
    const double cx = f.coeffs[v.dof(sd, 0)], cy = f.coeffs[v.dof(sd, 1)];
    out.xx += cx * pg.x;
    out.xy += cx * pg.y;
    out.yx += cy * pg.x;
    out.yy += cy * pg.y;
  }
  return out;
}

double evaluate_scalar(const FEFunction& f, const PointLocator& loc, Vec2 p) {
  double r, s;
  const int t = loc.locate(p, &r, &s);
  if (t < 0) fail(ErrorCode::ValidationError, "point outside mesh");
  return eval_scalar(f, t, r, s);
}

Vec2 evaluate_vector(const FEFunction& f, const PointLocator& loc, Vec2 p) {
  double r, s;
  const int t = loc.locate(p, &r, &s);
  if (t < 0) fail(ErrorCode::ValidationError, "point outside mesh");
  return eval_vector(f, t, r, s);
}

std::vector<Vec2> nodal_vectors(const FEFunction& f) {
  const FESpace& v = *f.space;
  if (v.components() != 2)
    fail(ErrorCode::DimensionMismatch, "nodal_vectors needs a vector field");
  std::vector<Vec2> out(v.mesh().n_nodes());
  for (int i = 0; i < v.mesh().n_nodes(); ++i)
    out[i] = {f.coeffs[v.dof(i, 0)], f.coeffs[v.dof(i, 1)]};
  return out;
}

Mesh deform_mesh(const Mesh& mesh, const FEFunction& displacement,
                 double min_area_ratio) {
  if (&displacement.space->mesh() != &mesh &&
      displacement.space->mesh().n_nodes() != mesh.n_nodes())
    fail(ErrorCode::ConnectivityMismatch, "displacement space/mesh mismatch");
  return deform_mesh(mesh, nodal_vectors(displacement), min_area_ratio);
}

}  // namespace robinfsi
