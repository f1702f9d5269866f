#include "robinfsi/norms.hpp"

#include <cmath>

#include "robinfsi/errors.hpp"
#include "robinfsi/quadrature.hpp"

namespace robinfsi {

namespace {

template <class PerPoint>
double integrate(const Mesh& geom, int degree, PerPoint&& f) {
  const TriRule& rule = tri_rule(degree);
  double acc = 0.0;
  for (int t = 0; t < geom.n_tris(); ++t) {
    const ElementGeometry eg = element_geometry(geom, t);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double r = rule.points[q].x, s = rule.points[q].y;
      acc += rule.weights[q] * eg.det * f(t, r, s, eg.map(r, s));
    }
  }
  return acc;
}

}  // namespace

double l2_norm(const FEFunction& f, const Mesh& geom) {
  const bool vec = f.space->components() == 2;
  const double sq = integrate(geom, 6, [&](int t, double r, double s, Vec2) {
    if (vec) {
      const Vec2 v = eval_vector(f, t, r, s);
      return dot(v, v);
    }
    const double v = eval_scalar(f, t, r, s);
    return v * v;
  });
  return std::sqrt(std::max(0.0, sq));
}

double s_norm(const FEFunction& eta, double mu, double lambda) {
  const Mesh& geom = eta.space->mesh();
  const double sq = integrate(geom, 6, [&](int t, double r, double s, Vec2) {
    const Mat2 g = eval_vector_grad(eta, geom, t, r, s);
    const Mat2 d = sym(g);
    const double div = g.trace();
    return 2.0 * mu * ddot(d, d) + lambda * div * div;
  });
  return std::sqrt(std::max(0.0, sq));
}

double l2_error(const FEFunction& f, const Mesh& geom, const VectorField& exact) {
  const double sq = integrate(geom, 6, [&](int t, double r, double s, Vec2 x) {
    const Vec2 e = eval_vector(f, t, r, s) - exact(x);
    return dot(e, e);
  });
  return std::sqrt(std::max(0.0, sq));
}

double l2_error_scalar(const FEFunction& f, const Mesh& geom,
                       const ScalarField& exact) {
  const double sq = integrate(geom, 6, [&](int t, double r, double s, Vec2 x) {
    const double e = eval_scalar(f, t, r, s) - exact(x);
    return e * e;
  });
  return std::sqrt(std::max(0.0, sq));
}

double s_error(const FEFunction& eta, double mu, double lambda,
               const TensorField& exact_grad) {
  const Mesh& geom = eta.space->mesh();
  const double sq = integrate(geom, 6, [&](int t, double r, double s, Vec2 x) {
    const Mat2 g = eval_vector_grad(eta, geom, t, r, s) - exact_grad(x);
    const Mat2 d = sym(g);
    const double div = g.trace();
    return 2.0 * mu * ddot(d, d) + lambda * div * div;
  });
  return std::sqrt(std::max(0.0, sq));
}

double l2_norm_closure(const Mesh& geom, const VectorField& f) {
  const double sq = integrate(geom, 6, [&](int, double, double, Vec2 x) {
    const Vec2 v = f(x);
    return dot(v, v);
  });
  return std::sqrt(std::max(0.0, sq));
}

double s_norm_closure(const Mesh& geom, double mu, double lambda,
                      const TensorField& grad) {
  const double sq = integrate(geom, 6, [&](int, double, double, Vec2 x) {
    const Mat2 g = grad(x);
    const Mat2 d = sym(g);
    const double div = g.trace();
    return 2.0 * mu * ddot(d, d) + lambda * div * div;
  });
  return std::sqrt(std::max(0.0, sq));
}

double relative_error(double e, double ref) {
  if (ref == 0.0 || !std::isfinite(ref))
    fail(ErrorCode::ZeroReference, "relative error with zero reference");
  return e / ref;
}

double interface_l2(const FEFunction& f, BoundaryTag tag, const Mesh& geom) {
  const FESpace& v = *f.space;
  const EdgeRule& rule = edge_rule(5);
  static const Vec2 ref[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  double acc = 0.0;
  for (const auto& e : geom.boundary) {
    if (e.tag != tag) continue;
    const Vec2 ra = ref[e.local], rb = ref[(e.local + 1) % 3];
    const double len = norm(geom.nodes[e.b] - geom.nodes[e.a]);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double u = rule.points[q];
      const double r = (1.0 - u) * ra.x + u * rb.x;
      const double s = (1.0 - u) * ra.y + u * rb.y;
      double val;
      if (v.components() == 2) {
        const Vec2 w = eval_vector(f, e.tri, r, s);
        val = dot(w, w);
      } else {
        const double w = eval_scalar(f, e.tri, r, s);
        val = w * w;
      }
      acc += rule.weights[q] * len * val;
    }
  }
  return std::sqrt(std::max(0.0, acc));
}

}  // namespace robinfsi
