#include "robinfsi/mms.hpp"

#include <cmath>

namespace robinfsi {

namespace {

// Shared polynomial structure of the exact fields:
//   g1 = 2 P(x) Q(y), g2 = P(x) Q(y) with P = x - x², Q = y - y²;
//   η = v = ξ = w = 1e-3 eᵗ (g1, g2),  p = −λ 1e-3 eᵗ (∂x g1 + ∂y g2).
struct Poly {
  double P, dP, Q, dQ;  // P, P', Q, Q'  (P'' = Q'' = −2)
  explicit Poly(Vec2 xy) {
    P = xy.x - xy.x * xy.x;
    dP = 1.0 - 2.0 * xy.x;
    Q = xy.y - xy.y * xy.y;
    dQ = 1.0 - 2.0 * xy.y;
  }
  Vec2 g() const { return {2.0 * P * Q, P * Q}; }
  double div() const { return 2.0 * dP * Q + P * dQ; }
  Vec2 grad_div() const {
    // ∇(2P'Q + PQ') with P'' = Q'' = −2
    return {-4.0 * Q + dP * dQ, 2.0 * dP * dQ - 2.0 * P};
  }
  Vec2 laplace_g() const { return {-4.0 * (P + Q), -2.0 * (P + Q)}; }
  Mat2 grad_g() const {
    return {2.0 * dP * Q, 2.0 * P * dQ, dP * Q, P * dQ};
  }
};

constexpr double kScale = 1e-3;

MmsProblem base_problem(double lambda_s) {
  MmsProblem pr;
  pr.mat.lambda_s = lambda_s;

  auto amp = [](double t) { return kScale * std::exp(t); };

  pr.eta = [amp](Vec2 x, double t) { return amp(t) * Poly(x).g(); };
  pr.xi = pr.eta;  // time factor eᵗ
  pr.v = pr.eta;
  pr.p = [amp, lambda_s](Vec2 x, double t) {
    return -lambda_s * amp(t) * Poly(x).div();
  };
  pr.grad_eta = [amp](Vec2 x, double t) { return amp(t) * Poly(x).grad_g(); };
  pr.grad_v = pr.grad_eta;

  const MaterialParams m = pr.mat;
  pr.f_f = [amp, m](Vec2 x, double t) {
    const Poly q(x);
    const Vec2 lap = q.laplace_g(), gd = q.grad_div();
    // ρ_F ∂t v + ∇p − μ_F(Δv + ∇ div v)
    return amp(t) * (m.rho_f * q.g() - m.lambda_s * gd - m.mu_f * (lap + gd));
  };
  pr.s = [amp](Vec2 x, double t) { return amp(t) * Poly(x).div(); };
  pr.f_s = [amp, m](Vec2 x, double t) {
    const Poly q(x);
    const Vec2 lap = q.laplace_g(), gd = q.grad_div();
    return amp(t) * (m.rho_s * q.g() - m.mu_s * (lap + gd) - m.lambda_s * gd);
  };

  return pr;
}

Mat2 stress_from(const Mat2& grad, double pval, double mu) {
  Mat2 sig = 2.0 * mu * sym(grad);
  sig.xx -= pval;
  sig.yy -= pval;
  return sig;
}

}  // namespace

Forcing MmsProblem::forcing() const {
  Forcing f;
  f.f_f = f_f;
  f.f_s = f_s;
  f.s = s;
  if (f_d) f.f_d = f_d;
  return f;
}

MmsProblem example1_problem(double lambda_s) {
  MmsProblem pr = base_problem(lambda_s);
  pr.moving = false;
  const MaterialParams m = pr.mat;
  pr.reference_traction = [m, pr](Vec2 x, double t) {
    const Mat2 sig = stress_from(pr.grad_v(x, t), pr.p(x, t), m.mu_f);
    return Vec2{sig.xy, sig.yy};  // σ n̂ with n̂ = (0,1)
  };
  return pr;
}

MmsProblem example2_problem(double lambda_s) {
  MmsProblem pr = base_problem(lambda_s);
  pr.moving = true;
  const MaterialParams m = pr.mat;

  pr.eta_f = pr.eta;
  pr.w = pr.eta;  // ∂t η_F with the eᵗ factor
  pr.grad_eta_f = pr.grad_eta;

  auto amp = [](double t) { return kScale * std::exp(t); };

  // moving-domain fluid forcing adds the convective part ρ_F (v·∇)v
  pr.f_f = [amp, m, base = pr.f_f](Vec2 x, double t) {
    const Poly q(x);
    const Vec2 g = q.g();
    const Mat2 gg = q.grad_g();
    const double a = amp(t);
    const Vec2 conv = a * a * (gg * g);
    return base(x, t) + m.rho_f * conv;
  };

  // −Δ η_F = f_D
  pr.f_d = [amp](Vec2 x, double t) {
    const Poly q(x);
    return -1.0 * amp(t) * q.laplace_g();
  };

  // Piola traction on Γ̂: J σ_F(x) F^{-T} n̂, x = X + η_F(X,t)
  pr.reference_traction = [m, pr](Vec2 ref, double t) {
    const Mat2 f = Mat2::identity() + pr.grad_eta_f(ref, t);
    const double j = f.det();
    const Vec2 x = ref + pr.eta_f(ref, t);
    const Mat2 sig = stress_from(pr.grad_v(x, t), pr.p(x, t), m.mu_f);
    const Mat2 piola = j * (sig * inverse(f).transpose());
    return Vec2{piola.xy, piola.yy};
  };
  return pr;
}

}  // namespace robinfsi
