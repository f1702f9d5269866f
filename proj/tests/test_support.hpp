#pragma once

// Test-local oracles, written independently of the library's assembly and
// solve paths: dense Gaussian elimination, Duffy-transform quadrature, and a
// dense element-loop assembler.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "robinfsi/fe_space.hpp"
#include "robinfsi/mesh.hpp"
#include "robinfsi/sparse.hpp"

namespace testsup {

using robinfsi::FESpace;
using robinfsi::Mesh;
using robinfsi::Vec2;

/// Dense row-major matrix with pivoted Gaussian elimination.
struct Dense {
  int n = 0, m = 0;
  std::vector<double> a;
  Dense() = default;
  Dense(int rows, int cols) : n(rows), m(cols), a(static_cast<size_t>(rows) * cols, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * m + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * m + j]; }
};

inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const int n = a.n;
  std::vector<int> piv(n);
  for (int i = 0; i < n; ++i) piv[i] = i;
  for (int k = 0; k < n; ++k) {
    int imax = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(imax, k))) imax = i;
    if (imax != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(imax, j));
      std::swap(b[k], b[imax]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      a(i, k) = 0.0;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

inline Dense to_dense(const robinfsi::SparseMatrix& s) {
  Dense d(s.rows(), s.cols());
  const auto ro = s.row_offsets();
  const auto ci = s.col_indices();
  const auto v = s.values();
  for (int i = 0; i < s.rows(); ++i)
    for (int k = ro[i]; k < ro[i + 1]; ++k) d(i, ci[k]) += v[k];
  return d;
}

/// Duffy-transform quadrature on the reference triangle: an 8x8 tensor Gauss
/// rule on the square collapsed to the triangle (exact well past degree 6).
struct DuffyRule {
  std::vector<Vec2> pts;
  std::vector<double> w;
  DuffyRule() {
    // 8-point Gauss-Legendre on [0,1]
    static const double gp[8] = {0.019855071751231884, 0.10166676129318664,
                                 0.2372337950418355,   0.40828267875217505,
                                 0.5917173212478249,   0.7627662049581645,
                                 0.8983332387068134,   0.9801449282487681};
    static const double gw[8] = {0.05061426814518813, 0.11119051722668723,
                                 0.15685332293894364, 0.18134189168918097,
                                 0.18134189168918097, 0.15685332293894364,
                                 0.11119051722668723, 0.05061426814518813};
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const double u = gp[i], t = gp[j];
        pts.push_back({u * (1.0 - t), u * t});  // x = u(1-t), y = u t
        w.push_back(gw[i] * gw[j] * u);         // Jacobian u
      }
  }
};

inline const DuffyRule& duffy() {
  static const DuffyRule rule;
  return rule;
}

/// Independent basis evaluation (literal formulas, no library calls).
inline int local_count(robinfsi::Family f) {
  using robinfsi::Family;
  return f == Family::P1 ? 3 : (f == Family::P1Bubble ? 4 : 6);
}

inline void basis_at(robinfsi::Family fam, double r, double s, double* n) {
  using robinfsi::Family;
  const double l0 = 1 - r - s, l1 = r, l2 = s;
  switch (fam) {
    case Family::P1:
      n[0] = l0; n[1] = l1; n[2] = l2;
      return;
    case Family::P1Bubble:
      n[0] = l0; n[1] = l1; n[2] = l2; n[3] = 27 * l0 * l1 * l2;
      return;
    case Family::P2:
      n[0] = l0 * (2 * l0 - 1);
      n[1] = l1 * (2 * l1 - 1);
      n[2] = l2 * (2 * l2 - 1);
      n[3] = 4 * l0 * l1;
      n[4] = 4 * l1 * l2;
      n[5] = 4 * l2 * l0;
      return;
  }
}

inline void basis_grad_at(robinfsi::Family fam, double r, double s, Vec2* g) {
  // central differences of the literal values: fully independent of the
  // library's analytic gradients
  const double h = 1e-6;
  const int nl = local_count(fam);
  std::vector<double> a(nl), b(nl);
  basis_at(fam, r + h, s, a.data());
  basis_at(fam, r - h, s, b.data());
  for (int l = 0; l < nl; ++l) g[l].x = (a[l] - b[l]) / (2 * h);
  basis_at(fam, r, s + h, a.data());
  basis_at(fam, r, s - h, b.data());
  for (int l = 0; l < nl; ++l) g[l].y = (a[l] - b[l]) / (2 * h);
}

struct ElemMap {
  Vec2 p0, e1, e2;
  double det;
  ElemMap(const Mesh& geom, int t) {
    p0 = geom.nodes[geom.tris[t][0]];
    e1 = geom.nodes[geom.tris[t][1]] - p0;
    e2 = geom.nodes[geom.tris[t][2]] - p0;
    det = e1.x * e2.y - e1.y * e2.x;
  }
  Vec2 map(double r, double s) const {
    return {p0.x + e1.x * r + e2.x * s, p0.y + e1.y * r + e2.y * s};
  }
  Vec2 phys_grad(Vec2 ref) const {
    // solve J^T g = ref, J = [e1 e2]
    const double inv = 1.0 / det;
    return {(e2.y * ref.x - e1.y * ref.y) * inv,
            (-e2.x * ref.x + e1.x * ref.y) * inv};
  }
};

/// Dense mass matrix oracle: density ∫ φ_i φ_j (per component block).
inline Dense dense_mass(const FESpace& v, double density, const Mesh& geom) {
  Dense out(v.n_dofs(), v.n_dofs());
  const auto& rule = duffy();
  const int nl = local_count(v.family());
  std::vector<double> n(nl);
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElemMap em(geom, t);
    for (size_t q = 0; q < rule.pts.size(); ++q) {
      basis_at(v.family(), rule.pts[q].x, rule.pts[q].y, n.data());
      const double w = rule.w[q] * em.det * density;
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j)
          for (int c = 0; c < v.components(); ++c)
            out(v.dof(v.element_scalar_dof(t, i), c),
                v.dof(v.element_scalar_dof(t, j), c)) += w * n[i] * n[j];
    }
  }
  return out;
}

/// Dense 2μ∫D:D + λ∫div·div + γ∫u·w oracle for vector spaces.
inline Dense dense_strain(const FESpace& v, const Mesh& geom, double mu,
                          double lambda, double gamma) {
  Dense out(v.n_dofs(), v.n_dofs());
  const auto& rule = duffy();
  const int nl = local_count(v.family());
  std::vector<double> n(nl);
  std::vector<Vec2> g(nl), pg(nl);
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElemMap em(geom, t);
    for (size_t q = 0; q < rule.pts.size(); ++q) {
      basis_at(v.family(), rule.pts[q].x, rule.pts[q].y, n.data());
      basis_grad_at(v.family(), rule.pts[q].x, rule.pts[q].y, g.data());
      for (int l = 0; l < nl; ++l) pg[l] = em.phys_grad(g[l]);
      const double w = rule.w[q] * em.det;
      for (int i = 0; i < nl; ++i)
        for (int ci = 0; ci < 2; ++ci) {
          const double dix[2][2] = {
              {pg[i].x * (ci == 0), 0.5 * (ci == 0 ? pg[i].y : pg[i].x)},
              {0.5 * (ci == 0 ? pg[i].y : pg[i].x), pg[i].y * (ci == 1)}};
          const double divi = ci == 0 ? pg[i].x : pg[i].y;
          for (int j = 0; j < nl; ++j)
            for (int cj = 0; cj < 2; ++cj) {
              const double djx[2][2] = {
                  {pg[j].x * (cj == 0), 0.5 * (cj == 0 ? pg[j].y : pg[j].x)},
                  {0.5 * (cj == 0 ? pg[j].y : pg[j].x), pg[j].y * (cj == 1)}};
              const double divj = cj == 0 ? pg[j].x : pg[j].y;
              double val = lambda * divi * divj;
              for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) val += 2.0 * mu * dix[a][b] * djx[a][b];
              if (ci == cj) val += gamma * n[i] * n[j];
              out(v.dof(v.element_scalar_dof(t, i), ci),
                  v.dof(v.element_scalar_dof(t, j), cj)) += w * val;
            }
        }
    }
  }
  return out;
}

/// Dense divergence oracle ∫ ψ_k ∇·φ_j.
inline Dense dense_divergence(const FESpace& v, const FESpace& q,
                              const Mesh& geom) {
  Dense out(q.n_dofs(), v.n_dofs());
  const auto& rule = duffy();
  const int nv = local_count(v.family()), nq = local_count(q.family());
  std::vector<double> nn(nq);
  std::vector<Vec2> g(nv), pg(nv);
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElemMap em(geom, t);
    for (size_t qq = 0; qq < rule.pts.size(); ++qq) {
      basis_at(q.family(), rule.pts[qq].x, rule.pts[qq].y, nn.data());
      basis_grad_at(v.family(), rule.pts[qq].x, rule.pts[qq].y, g.data());
      for (int l = 0; l < nv; ++l) pg[l] = em.phys_grad(g[l]);
      const double w = rule.w[qq] * em.det;
      for (int k = 0; k < nq; ++k)
        for (int j = 0; j < nv; ++j) {
          out(q.element_scalar_dof(t, k), v.dof(v.element_scalar_dof(t, j), 0)) +=
              w * nn[k] * pg[j].x;
          out(q.element_scalar_dof(t, k), v.dof(v.element_scalar_dof(t, j), 1)) +=
              w * nn[k] * pg[j].y;
        }
    }
  }
  return out;
}

/// Dense convection oracle ρ ∫ ((a·∇)φ_j + ½(∇·a_v − s)φ_j)·φ_i with
/// a = a_v − w evaluated from the coefficient vectors directly.
inline Dense dense_convection(const FESpace& v, const Mesh& geom, double rho,
                              const robinfsi::FEFunction& a_v,
                              const robinfsi::FEFunction* w,
                              const std::function<double(Vec2)>* src) {
  Dense out(v.n_dofs(), v.n_dofs());
  const auto& rule = duffy();
  const int nl = local_count(v.family());
  std::vector<double> n(nl), nw(3);
  std::vector<Vec2> g(nl), pg(nl);
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElemMap em(geom, t);
    for (size_t q = 0; q < rule.pts.size(); ++q) {
      const double r = rule.pts[q].x, s = rule.pts[q].y;
      basis_at(v.family(), r, s, n.data());
      basis_grad_at(v.family(), r, s, g.data());
      for (int l = 0; l < nl; ++l) pg[l] = em.phys_grad(g[l]);

      Vec2 a{0.0, 0.0};
      double div_av = 0.0;
      for (int l = 0; l < nl; ++l) {
        const int sd = v.element_scalar_dof(t, l);
        a.x += a_v.coeffs[v.dof(sd, 0)] * n[l];
        a.y += a_v.coeffs[v.dof(sd, 1)] * n[l];
        div_av += a_v.coeffs[v.dof(sd, 0)] * pg[l].x +
                  a_v.coeffs[v.dof(sd, 1)] * pg[l].y;
      }
      if (w) {
        basis_at(robinfsi::Family::P1, r, s, nw.data());
        for (int l = 0; l < 3; ++l) {
          const int node = geom.tris[t][l];
          a.x -= w->coeffs[w->space->dof(node, 0)] * nw[l];
          a.y -= w->coeffs[w->space->dof(node, 1)] * nw[l];
        }
      }
      double corr = div_av;
      if (src) corr -= (*src)(em.map(r, s));

      const double wq = rule.w[q] * em.det * rho;
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j) {
          const double adv = a.x * pg[j].x + a.y * pg[j].y + 0.5 * corr * n[j];
          for (int c = 0; c < 2; ++c)
            out(v.dof(v.element_scalar_dof(t, i), c),
                v.dof(v.element_scalar_dof(t, j), c)) += wq * adv * n[i];
        }
    }
  }
  return out;
}

inline double max_abs_diff(const Dense& a, const Dense& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.a.size(); ++k)
    m = std::max(m, std::abs(a.a[k] - b.a[k]));
  return m;
}

}  // namespace testsup
