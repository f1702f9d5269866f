#include "robinfsi/ale.hpp"

#include <cmath>

#include "robinfsi/errors.hpp"
#include "robinfsi/norms.hpp"
#include "robinfsi/quadrature.hpp"

namespace robinfsi {

namespace {

/// Scalar P1 Laplacian on the reference mesh.
SparseMatrix assemble_laplace(const FESpace& s) {
  const Mesh& geom = s.mesh();
  const TriRule& rule = tri_rule(2);
  TripletList out;
  Vec2 g[3];
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElementGeometry eg = element_geometry(geom, t);
    s.basis_ref_grads(0.0, 0.0, {g, 3});
    Vec2 pg[3];
    for (int l = 0; l < 3; ++l) pg[l] = eg.phys_grad(g[l]);
    double area = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) area += rule.weights[q];
    area *= eg.det;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out.add(geom.tris[t][i], geom.tris[t][j], area * dot(pg[i], pg[j]));
  }
  return std::move(out).compress(s.n_scalar_dofs(), s.n_scalar_dofs());
}

}  // namespace

AleSolver::AleSolver(const Mesh& fluid_ref)
    : ref_(&fluid_ref),
      scalar_space_(fluid_ref, Family::P1, 1),
      vec_space_(fluid_ref, Family::P1, 2),
      iface_nodes_(interface_nodes(fluid_ref)),
      dirichlet_(scalar_space_.n_dofs()) {
  for (const auto& e : fluid_ref.boundary) {
    dirichlet_.set(e.a, 0.0);
    dirichlet_.set(e.b, 0.0);
  }
  // interface nodes shared with another boundary part stay pinned at zero
  // (the inlet/outlet sections do not move)
  pinned_.assign(scalar_space_.n_dofs(), 0);
  for (const auto& e : fluid_ref.boundary)
    if (e.tag != BoundaryTag::Interface) pinned_[e.a] = pinned_[e.b] = 1;
  laplace_orig_ = assemble_laplace(scalar_space_);
  laplace_elim_ = laplace_orig_;
  std::vector<double> dummy(scalar_space_.n_dofs(), 0.0);
  apply_dirichlet(laplace_elim_, dummy, dirichlet_);
  fac_ = std::make_unique<Factorization>(laplace_elim_);
}

FEFunction AleSolver::extend(std::span<const Vec2> interface_disp,
                             const VectorField* f_d) const {
  if (interface_disp.size() != iface_nodes_.size())
    fail(ErrorCode::DimensionMismatch, "interface displacement size mismatch");

  FEFunction out(vec_space_);
  const int n = scalar_space_.n_dofs();
  for (int comp = 0; comp < 2; ++comp) {
    std::vector<double> g(n, 0.0);  // Dirichlet values
    for (size_t k = 0; k < iface_nodes_.size(); ++k) {
      if (pinned_[iface_nodes_[k]]) continue;
      g[iface_nodes_[k]] =
          (comp == 0) ? interface_disp[k].x : interface_disp[k].y;
    }

    std::vector<double> b(n, 0.0);
    if (f_d) {
      const VectorField& f = *f_d;
      ScalarField fc = [&f, comp](Vec2 x) {
        const Vec2 v = f(x);
        return comp == 0 ? v.x : v.y;
      };
      b = assemble_scalar_load(scalar_space_, *ref_, fc);
    }
    // move Dirichlet columns to the rhs, then pin constrained rows
    std::vector<double> kg = laplace_orig_ * std::span<const double>(g);
    for (int i = 0; i < n; ++i)
      if (!dirichlet_.constrained(i)) b[i] -= kg[i];
    for (int i = 0; i < n; ++i)
      if (dirichlet_.constrained(i)) b[i] = laplace_elim_.coeff(i, i) * g[i];

    const std::vector<double> x = fac_->solve(b);
    for (int i = 0; i < n; ++i) out.coeffs[vec_space_.dof(i, comp)] = x[i];
  }
  return out;
}

FEFunction domain_velocity(const FEFunction& eta_new, const FEFunction& eta_old,
                           double dt) {
  if (eta_new.space != eta_old.space)
    fail(ErrorCode::ConnectivityMismatch, "domain_velocity: space mismatch");
  FEFunction w(*eta_new.space);
  for (size_t i = 0; i < w.coeffs.size(); ++i)
    w.coeffs[i] = (eta_new.coeffs[i] - eta_old.coeffs[i]) / dt;
  return w;
}

FEFunction interface_velocity_override(const FEFunction& v, const FEFunction& w) {
  const FESpace& vs = *v.space;
  const Mesh& mesh = vs.mesh();
  FEFunction out = v;
  for (const auto& e : mesh.boundary) {
    if (e.tag != BoundaryTag::Interface) continue;
    for (int node : {e.a, e.b}) {
      for (int c = 0; c < 2; ++c)
        out.coeffs[vs.dof(node, c)] = w.coeffs[w.space->dof(node, c)];
    }
    if (vs.family() == Family::P2) {
      const int mid = vs.edge_scalar_dof(e.a, e.b);
      for (int c = 0; c < 2; ++c)
        out.coeffs[vs.dof(mid, c)] =
            0.5 * (w.coeffs[w.space->dof(e.a, c)] + w.coeffs[w.space->dof(e.b, c)]);
    }
  }
  return out;
}

namespace {

double field_sq_norm(const FEFunction& u, const Mesh& geom) {
  const double n = l2_norm(u, geom);
  return n * n;
}

}  // namespace

double gcl_check(const FEFunction& u, const Mesh& m_old, const Mesh& m_half,
                 const Mesh& m_new, const FEFunction& w, double dt) {
  const double a_new = field_sq_norm(u, m_new);
  const double a_old = field_sq_norm(u, m_old);

  const TriRule& rule = tri_rule(6);
  const bool vec = u.space->components() == 2;
  double mid = 0.0;
  for (int t = 0; t < m_half.n_tris(); ++t) {
    const ElementGeometry eg = element_geometry(m_half, t);
    // w is P1, so ∇·w is constant per element on the half mesh
    const Mat2 gw = eval_vector_grad(w, m_half, t, 1.0 / 3.0, 1.0 / 3.0);
    const double divw = gw.trace();
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double r = rule.points[q].x, s = rule.points[q].y;
      double usq;
      if (vec) {
        const Vec2 val = eval_vector(u, t, r, s);
        usq = dot(val, val);
      } else {
        const double val = eval_scalar(u, t, r, s);
        usq = val * val;
      }
      mid += rule.weights[q] * eg.det * usq * divw;
    }
  }
  return std::abs(a_new - a_old - dt * mid) / std::max(1.0, a_new);
}

namespace {

void j_range(const Mesh& ref, const Mesh& deformed, double& jmin, double& jmax) {
  jmin = 1e300;
  jmax = -1e300;
  for (int t = 0; t < ref.n_tris(); ++t) {
    const double j = triangle_area(deformed, t) / triangle_area(ref, t);
    jmin = std::min(jmin, j);
    jmax = std::max(jmax, j);
  }
}

}  // namespace

AleState advance_geometry(const AleSolver& solver, const AleState& prev,
                          const FEFunction& eta_new, double dt, double j_min,
                          double j_max) {
  AleState next;
  next.eta_f = eta_new;
  next.w = domain_velocity(eta_new, prev.eta_f, dt);
  next.mesh_prev = prev.mesh_curr;
  next.mesh_curr = deform_mesh(solver.reference(), eta_new);
  next.mesh_half = midpoint_mesh(next.mesh_prev, next.mesh_curr);
  j_range(solver.reference(), next.mesh_curr, next.min_j, next.max_j);
  if (next.min_j < j_min || next.max_j > j_max)
    fail(ErrorCode::TangledMesh,
         "ALE map J out of range [" + std::to_string(next.min_j) + ", " +
             std::to_string(next.max_j) + "]");
  return next;
}

AleState initial_geometry(const AleSolver& solver, const FEFunction& eta0,
                          double j_min, double j_max) {
  AleState st;
  st.eta_f = eta0;
  st.w = FEFunction(solver.space());
  st.mesh_curr = deform_mesh(solver.reference(), eta0);
  st.mesh_prev = st.mesh_curr;
  st.mesh_half = st.mesh_curr;
  j_range(solver.reference(), st.mesh_curr, st.min_j, st.max_j);
  if (st.min_j < j_min || st.max_j > j_max)
    fail(ErrorCode::TangledMesh, "initial ALE map J out of range");
  return st;
}

}  // namespace robinfsi
