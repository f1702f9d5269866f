#include "robinfsi/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "robinfsi/errors.hpp"
#include "robinfsi/quadrature.hpp"

namespace robinfsi {

namespace {

constexpr int kMaxLocal = 6;

struct BasisCache {
  // per quadrature point: values and reference gradients
  std::vector<std::array<double, kMaxLocal>> val;
  std::vector<std::array<Vec2, kMaxLocal>> grad;
};

BasisCache cache_basis(const FESpace& v, const TriRule& rule) {
  BasisCache c;
  c.val.resize(rule.points.size());
  c.grad.resize(rule.points.size());
  for (size_t q = 0; q < rule.points.size(); ++q) {
    v.basis_values(rule.points[q].x, rule.points[q].y,
                   {c.val[q].data(), static_cast<size_t>(v.n_local())});
    v.basis_ref_grads(rule.points[q].x, rule.points[q].y,
                      {c.grad[q].data(), static_cast<size_t>(v.n_local())});
  }
  return c;
}

void check_geometry(const FESpace& v, const Mesh& geom) {
  if (geom.n_nodes() != v.mesh().n_nodes() || geom.n_tris() != v.mesh().n_tris())
    fail(ErrorCode::ConnectivityMismatch, "geometry snapshot does not match space mesh");
}

/// Scatter a symmetric/nonsymmetric local block over vector components.
void scatter_vector_block(TripletList& out, const FESpace& v, int tri,
                          const double* local, int nl) {
  for (int i = 0; i < nl; ++i) {
    const int si = v.element_scalar_dof(tri, i);
    for (int j = 0; j < nl; ++j) {
      const int sj = v.element_scalar_dof(tri, j);
      const double val = local[i * nl + j];
      if (val == 0.0) continue;
      for (int c = 0; c < v.components(); ++c)
        out.add(v.dof(si, c), v.dof(sj, c), val);
    }
  }
}

}  // namespace

SparseMatrix assemble_mass(const FESpace& v, double density, const Mesh& geom) {
  if (density <= 0.0) fail(ErrorCode::ValidationError, "density must be > 0");
  check_geometry(v, geom);
  const TriRule& rule = tri_rule(v.assembly_degree() == 6 ? 6 : 4);
  const BasisCache cache = cache_basis(v, rule);
  const int nl = v.n_local();

  TripletList out;
  out.reserve(static_cast<size_t>(geom.n_tris()) * nl * nl * v.components());
  double local[kMaxLocal * kMaxLocal];
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElementGeometry eg = element_geometry(geom, t);
    std::fill(local, local + nl * nl, 0.0);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * eg.det * density;
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j)
          local[i * nl + j] += w * cache.val[q][i] * cache.val[q][j];
    }
    scatter_vector_block(out, v, t, local, nl);
  }
  return std::move(out).compress(v.n_dofs(), v.n_dofs());
}

namespace {

/// 2 μ ∫ D(u):D(w) + λ ∫ div·div + γ ∫ u·w, fully coupled components.
SparseMatrix assemble_strain_form(const FESpace& v, const Mesh& geom, double mu,
                                  double lambda, double gamma) {
  if (v.components() != 2)
    fail(ErrorCode::ValidationError, "strain forms need a vector space");
  const TriRule& rule = tri_rule(v.assembly_degree());
  const BasisCache cache = cache_basis(v, rule);
  const int nl = v.n_local();

  TripletList out;
  out.reserve(static_cast<size_t>(geom.n_tris()) * nl * nl * 4);
  Vec2 pg[kMaxLocal];
  // local dof index = l * 2 + c
  double local[2 * kMaxLocal * 2 * kMaxLocal];
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElementGeometry eg = element_geometry(geom, t);
    const int n2 = 2 * nl;
    std::fill(local, local + n2 * n2, 0.0);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * eg.det;
      for (int l = 0; l < nl; ++l) pg[l] = eg.phys_grad(cache.grad[q][l]);
      for (int i = 0; i < nl; ++i) {
        for (int ci = 0; ci < 2; ++ci) {
          // D(φ) for basis (i, ci): rows/cols of the symmetric gradient
          const Vec2 gi = pg[i];
          Mat2 Di;
          if (ci == 0)
            Di = {gi.x, 0.5 * gi.y, 0.5 * gi.y, 0.0};
          else
            Di = {0.0, 0.5 * gi.x, 0.5 * gi.x, gi.y};
          const double div_i = (ci == 0) ? gi.x : gi.y;
          for (int j = 0; j < nl; ++j) {
            for (int cj = 0; cj < 2; ++cj) {
              const Vec2 gj = pg[j];
              Mat2 Dj;
              if (cj == 0)
                Dj = {gj.x, 0.5 * gj.y, 0.5 * gj.y, 0.0};
              else
                Dj = {0.0, 0.5 * gj.x, 0.5 * gj.x, gj.y};
              const double div_j = (cj == 0) ? gj.x : gj.y;
              double val = 2.0 * mu * ddot(Di, Dj) + lambda * div_i * div_j;
              if (gamma != 0.0 && ci == cj)
                val += gamma * cache.val[q][i] * cache.val[q][j];
              local[(i * 2 + ci) * n2 + (j * 2 + cj)] += w * val;
            }
          }
        }
      }
    }
    for (int i = 0; i < nl; ++i)
      for (int ci = 0; ci < 2; ++ci)
        for (int j = 0; j < nl; ++j)
          for (int cj = 0; cj < 2; ++cj) {
            const double val = local[(i * 2 + ci) * n2 + (j * 2 + cj)];
            if (val != 0.0)
              out.add(v.dof(v.element_scalar_dof(t, i), ci),
                      v.dof(v.element_scalar_dof(t, j), cj), val);
          }
  }
  return std::move(out).compress(v.n_dofs(), v.n_dofs());
}

}  // namespace

SparseMatrix assemble_elasticity(const FESpace& v, double mu, double lambda,
                                 double gamma) {
  if (mu <= 0.0 || lambda < 0.0 || gamma < 0.0)
    fail(ErrorCode::ValidationError, "elasticity parameters out of range");
  return assemble_strain_form(v, v.mesh(), mu, lambda, gamma);
}

SparseMatrix assemble_fluid_viscous(const FESpace& v, double mu,
                                    const Mesh& geom) {
  if (mu <= 0.0) fail(ErrorCode::ValidationError, "viscosity must be > 0");
  check_geometry(v, geom);
  return assemble_strain_form(v, geom, mu, 0.0, 0.0);
}

SparseMatrix assemble_divergence(const FESpace& v, const FESpace& q,
                                 const Mesh& geom) {
  if (q.components() != 1)
    fail(ErrorCode::ValidationError, "pressure space must be scalar");
  if (v.components() != 2)
    fail(ErrorCode::ValidationError, "velocity space must be vector-valued");
  check_geometry(v, geom);
  check_geometry(q, geom);
  const int deg = std::max(v.assembly_degree(), q.assembly_degree());
  const TriRule& rule = tri_rule(deg);
  const BasisCache vc = cache_basis(v, rule);
  const BasisCache qc = cache_basis(q, rule);
  const int nv = v.n_local(), nq = q.n_local();

  TripletList out;
  out.reserve(static_cast<size_t>(geom.n_tris()) * nv * nq * 2);
  Vec2 pg[kMaxLocal];
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElementGeometry eg = element_geometry(geom, t);
    for (size_t qp = 0; qp < rule.points.size(); ++qp) {
      const double w = rule.weights[qp] * eg.det;
      for (int l = 0; l < nv; ++l) pg[l] = eg.phys_grad(vc.grad[qp][l]);
      for (int k = 0; k < nq; ++k) {
        const double psik = qc.val[qp][k];
        const int row = q.element_scalar_dof(t, k);
        for (int j = 0; j < nv; ++j) {
          const int sj = v.element_scalar_dof(t, j);
          out.add(row, v.dof(sj, 0), w * psik * pg[j].x);
          out.add(row, v.dof(sj, 1), w * psik * pg[j].y);
        }
      }
    }
  }
  return std::move(out).compress(q.n_dofs(), v.n_dofs());
}

SparseMatrix assemble_ale_convection(const FESpace& v, const Mesh& half_geom,
                                     double rho, const FEFunction& a_v,
                                     const FEFunction* w,
                                     const ScalarField* mass_source) {
  check_geometry(v, half_geom);
  if (a_v.space != &v)
    fail(ErrorCode::ConnectivityMismatch, "advecting field must live on the velocity space");
  const TriRule& rule = tri_rule(6);
  const BasisCache cache = cache_basis(v, rule);
  const int nl = v.n_local();
  const FESpace* wspace = w ? w->space : nullptr;

  TripletList out;
  out.reserve(static_cast<size_t>(half_geom.n_tris()) * nl * nl * 2);
  Vec2 pg[kMaxLocal];
  double local[kMaxLocal * kMaxLocal];
  for (int t = 0; t < half_geom.n_tris(); ++t) {
    const ElementGeometry eg = element_geometry(half_geom, t);
    std::fill(local, local + nl * nl, 0.0);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double r = rule.points[q].x, s = rule.points[q].y;
      const double wq = rule.weights[q] * eg.det;
      for (int l = 0; l < nl; ++l) pg[l] = eg.phys_grad(cache.grad[q][l]);

      Vec2 a = eval_vector(a_v, t, r, s);
      const Mat2 grad_av = eval_vector_grad(a_v, half_geom, t, r, s);
      double div_corr = grad_av.xx + grad_av.yy;
      if (w) {
        (void)wspace;
        a -= eval_vector(*w, t, r, s);
      }
      if (mass_source) div_corr -= (*mass_source)(eg.map(r, s));

      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j) {
          const double adv = a.x * pg[j].x + a.y * pg[j].y;  // (a·∇)N_j
          local[i * nl + j] += wq * rho *
                               (adv + 0.5 * div_corr * cache.val[q][j]) *
                               cache.val[q][i];
        }
    }
    scatter_vector_block(out, v, t, local, nl);
  }
  return std::move(out).compress(v.n_dofs(), v.n_dofs());
}

namespace {

struct EdgeQuadPoint {
  double r, s;     // element reference coords
  Vec2 x;          // physical point
  double weight;   // includes edge length
};

/// Quadrature points of a boundary edge mapped into its owner element.
std::vector<EdgeQuadPoint> edge_points(const Mesh& geom, const BoundaryEdge& e,
                                       const EdgeRule& rule) {
  static const Vec2 ref[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const Vec2 ra = ref[e.local], rb = ref[(e.local + 1) % 3];
  const Vec2 xa = geom.nodes[e.a], xb = geom.nodes[e.b];
  const double len = norm(xb - xa);
  std::vector<EdgeQuadPoint> out(rule.points.size());
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const double u = rule.points[q];
    out[q].r = (1.0 - u) * ra.x + u * rb.x;
    out[q].s = (1.0 - u) * ra.y + u * rb.y;
    out[q].x = (1.0 - u) * xa + u * xb;
    out[q].weight = rule.weights[q] * len;
  }
  return out;
}

}  // namespace

SparseMatrix assemble_boundary_mass(const FESpace& v, BoundaryTag tag,
                                    const Mesh& geom) {
  check_geometry(v, geom);
  const EdgeRule& rule = edge_rule(5);
  const int nl = v.n_local();
  double n[kMaxLocal];
  TripletList out;
  for (const auto& e : geom.boundary) {
    if (e.tag != tag) continue;
    for (const auto& qp : edge_points(geom, e, rule)) {
      v.basis_values(qp.r, qp.s, {n, static_cast<size_t>(nl)});
      for (int i = 0; i < nl; ++i) {
        if (n[i] == 0.0) continue;
        const int si = v.element_scalar_dof(e.tri, i);
        for (int j = 0; j < nl; ++j) {
          if (n[j] == 0.0) continue;
          const int sj = v.element_scalar_dof(e.tri, j);
          for (int c = 0; c < v.components(); ++c)
            out.add(v.dof(si, c), v.dof(sj, c), qp.weight * n[i] * n[j]);
        }
      }
    }
  }
  return std::move(out).compress(v.n_dofs(), v.n_dofs());
}

SparseMatrix assemble_directional_boundary(const FESpace& v,
                                           std::initializer_list<BoundaryTag> tags,
                                           const Mesh& geom,
                                           const FEFunction& v_n, double rho) {
  check_geometry(v, geom);
  const EdgeRule& rule = edge_rule(5);
  const int nl = v.n_local();
  double n[kMaxLocal];
  TripletList out;
  for (const auto& e : geom.boundary) {
    if (std::find(tags.begin(), tags.end(), e.tag) == tags.end()) continue;
    const Vec2 nrm = boundary_normal(geom, e);
    for (const auto& qp : edge_points(geom, e, rule)) {
      v.basis_values(qp.r, qp.s, {n, static_cast<size_t>(nl)});
      const Vec2 vval = eval_vector(v_n, e.tri, qp.r, qp.s);
      const double coef = 0.5 * rho * dot(vval, nrm) * qp.weight;
      for (int i = 0; i < nl; ++i) {
        if (n[i] == 0.0) continue;
        const int si = v.element_scalar_dof(e.tri, i);
        for (int j = 0; j < nl; ++j) {
          if (n[j] == 0.0) continue;
          const int sj = v.element_scalar_dof(e.tri, j);
          for (int c = 0; c < v.components(); ++c)
            out.add(v.dof(si, c), v.dof(sj, c), coef * n[i] * n[j]);
        }
      }
    }
  }
  return std::move(out).compress(v.n_dofs(), v.n_dofs());
}

std::vector<double> assemble_neumann_load(const FESpace& v, BoundaryTag tag,
                                          const ScalarField& pressure,
                                          const Mesh& geom) {
  check_geometry(v, geom);
  const EdgeRule& rule = edge_rule(5);
  const int nl = v.n_local();
  double n[kMaxLocal];
  std::vector<double> out(v.n_dofs(), 0.0);
  for (const auto& e : geom.boundary) {
    if (e.tag != tag) continue;
    const Vec2 nrm = boundary_normal(geom, e);
    for (const auto& qp : edge_points(geom, e, rule)) {
      v.basis_values(qp.r, qp.s, {n, static_cast<size_t>(nl)});
      const double p = pressure(qp.x);
      for (int i = 0; i < nl; ++i) {
        if (n[i] == 0.0) continue;
        const int si = v.element_scalar_dof(e.tri, i);
        out[v.dof(si, 0)] += -qp.weight * p * nrm.x * n[i];
        out[v.dof(si, 1)] += -qp.weight * p * nrm.y * n[i];
      }
    }
  }
  return out;
}

std::vector<double> assemble_vector_load(const FESpace& v, const Mesh& geom,
                                         const VectorField& f) {
  check_geometry(v, geom);
  const TriRule& rule = tri_rule(v.assembly_degree());
  const BasisCache cache = cache_basis(v, rule);
  const int nl = v.n_local();
  std::vector<double> out(v.n_dofs(), 0.0);
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElementGeometry eg = element_geometry(geom, t);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * eg.det;
      const Vec2 val = f(eg.map(rule.points[q].x, rule.points[q].y));
      for (int i = 0; i < nl; ++i) {
        const int si = v.element_scalar_dof(t, i);
        out[v.dof(si, 0)] += w * val.x * cache.val[q][i];
        out[v.dof(si, 1)] += w * val.y * cache.val[q][i];
      }
    }
  }
  return out;
}

std::vector<double> assemble_scalar_load(const FESpace& q, const Mesh& geom,
                                         const ScalarField& f) {
  check_geometry(q, geom);
  const TriRule& rule = tri_rule(std::max(4, q.assembly_degree()));
  const BasisCache cache = cache_basis(q, rule);
  const int nl = q.n_local();
  std::vector<double> out(q.n_dofs(), 0.0);
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElementGeometry eg = element_geometry(geom, t);
    for (size_t qp = 0; qp < rule.points.size(); ++qp) {
      const double w = rule.weights[qp] * eg.det;
      const double val = f(eg.map(rule.points[qp].x, rule.points[qp].y));
      for (int i = 0; i < nl; ++i)
        out[q.element_scalar_dof(t, i)] += w * val * cache.val[qp][i];
    }
  }
  return out;
}

std::vector<double> assemble_boundary_vector_load(const FESpace& v,
                                                  BoundaryTag tag,
                                                  const Mesh& geom,
                                                  const VectorField& traction) {
  check_geometry(v, geom);
  const EdgeRule& rule = edge_rule(5);
  const int nl = v.n_local();
  double n[kMaxLocal];
  std::vector<double> out(v.n_dofs(), 0.0);
  for (const auto& e : geom.boundary) {
    if (e.tag != tag) continue;
    for (const auto& qp : edge_points(geom, e, rule)) {
      v.basis_values(qp.r, qp.s, {n, static_cast<size_t>(nl)});
      const Vec2 tr = traction(qp.x);
      for (int i = 0; i < nl; ++i) {
        if (n[i] == 0.0) continue;
        const int si = v.element_scalar_dof(e.tri, i);
        out[v.dof(si, 0)] += qp.weight * tr.x * n[i];
        out[v.dof(si, 1)] += qp.weight * tr.y * n[i];
      }
    }
  }
  return out;
}

int DirichletSet::count() const {
  int n = 0;
  for (char c : mask_) n += c;
  return n;
}

void DirichletSet::merge(const DirichletSet& other) {
  if (other.size() != size()) fail(ErrorCode::DimensionMismatch, "merge");
  for (int i = 0; i < size(); ++i)
    if (other.mask_[i]) set(i, other.value_[i]);
}

DirichletSet DirichletSet::shifted(int offset, int total) const {
  DirichletSet out(total);
  for (int i = 0; i < size(); ++i)
    if (mask_[i]) out.set(offset + i, value_[i]);
  return out;
}

void add_boundary_dirichlet(DirichletSet& set, const FESpace& v,
                            std::initializer_list<BoundaryTag> tags,
                            std::initializer_list<int> components,
                            double value) {
  const Mesh& m = v.mesh();
  for (const auto& e : m.boundary) {
    if (std::find(tags.begin(), tags.end(), e.tag) == tags.end()) continue;
    for (int c : components) {
      set.set(v.dof(e.a, c), value);
      set.set(v.dof(e.b, c), value);
      if (v.family() == Family::P2)
        set.set(v.dof(v.edge_scalar_dof(e.a, e.b), c), value);
    }
  }
}

void apply_dirichlet(SparseMatrix& a, std::span<double> b,
                     const DirichletSet& set) {
  if (a.rows() != set.size() || static_cast<int>(b.size()) != set.size())
    fail(ErrorCode::DimensionMismatch, "apply_dirichlet shape mismatch");
  const auto ro = a.row_offsets();
  const auto ci = a.col_indices();
  auto vals = a.values_mutable();

  std::vector<double> diag(a.rows(), 1.0);
  for (int i = 0; i < a.rows(); ++i) {
    if (!set.constrained(i)) continue;
    for (int k = ro[i]; k < ro[i + 1]; ++k)
      if (ci[k] == i && std::abs(vals[k]) > 1e-300) diag[i] = vals[k];
  }

  for (int i = 0; i < a.rows(); ++i) {
    if (set.constrained(i)) {
      for (int k = ro[i]; k < ro[i + 1]; ++k)
        vals[k] = (ci[k] == i) ? diag[i] : 0.0;
      b[i] = diag[i] * set.value(i);
    } else {
      for (int k = ro[i]; k < ro[i + 1]; ++k) {
        const int j = ci[k];
        if (set.constrained(j)) {
          b[i] -= vals[k] * set.value(j);
          vals[k] = 0.0;
        }
      }
    }
  }
}

void apply_dirichlet_rhs_only(std::span<double> b, const DirichletSet& set) {
  // valid when the matrix was eliminated with the same (homogeneous) set
  for (int i = 0; i < set.size(); ++i)
    if (set.constrained(i)) b[i] = 0.0;
}

Mat2 fluid_stress(const FEFunction& v, const FEFunction& p, double mu,
                  const Mesh& geom, int tri, double r, double s) {
  const Mat2 g = eval_vector_grad(v, geom, tri, r, s);
  const double pv = eval_scalar(p, tri, r, s);
  Mat2 sig = 2.0 * mu * sym(g);
  sig.xx -= pv;
  sig.yy -= pv;
  return sig;
}

Mat2 solid_stress(const FEFunction& eta, double mu, double lambda, int tri,
                  double r, double s) {
  const Mesh& ref = eta.space->mesh();
  const Mat2 g = eval_vector_grad(eta, ref, tri, r, s);
  Mat2 sig = 2.0 * mu * sym(g);
  const double div = g.trace();
  sig.xx += lambda * div;
  sig.yy += lambda * div;
  return sig;
}

Vec2 pointwise_stress(const PointwiseStressArgs& args, Vec2 point,
                      InterfaceSide side) {
  const Mesh& geom = (side == InterfaceSide::Fluid)
                         ? *args.fluid_geom
                         : args.eta->space->mesh();
  for (const auto& e : geom.boundary) {
    if (e.tag != BoundaryTag::Interface) continue;
    const Vec2 xa = geom.nodes[e.a], xb = geom.nodes[e.b];
    const Vec2 d = xb - xa;
    const double len2 = dot(d, d);
    const double u = dot(point - xa, d) / len2;
    const double off = std::abs(cross(d, point - xa)) / std::sqrt(len2);
    if (u < -1e-10 || u > 1.0 + 1e-10 || off > 1e-9 * (1.0 + std::sqrt(len2)))
      continue;
    static const Vec2 ref[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    const Vec2 ra = ref[e.local], rb = ref[(e.local + 1) % 3];
    const double r = (1.0 - u) * ra.x + u * rb.x;
    const double s = (1.0 - u) * ra.y + u * rb.y;
    // n is always the outward fluid normal
    Vec2 n = boundary_normal(geom, e);
    Mat2 sig;
    if (side == InterfaceSide::Fluid) {
      sig = fluid_stress(*args.v, *args.p, args.mu_f, geom, e.tri, r, s);
    } else {
      sig = solid_stress(*args.eta, args.mu_s, args.lambda_s, e.tri, r, s);
      n = -n;  // solid-side boundary normal points into the fluid
    }
    return sig * n;
  }
  fail(ErrorCode::PointNotOnInterface, "point is not on the tagged interface");
}

}  // namespace robinfsi
