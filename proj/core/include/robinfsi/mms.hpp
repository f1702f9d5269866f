#pragma once

#include <functional>

#include "robinfsi/fsi_common.hpp"
#include "robinfsi/vec.hpp"

namespace robinfsi {

using SpaceTimeVec = std::function<Vec2(Vec2, double)>;
using SpaceTimeScal = std::function<double(Vec2, double)>;
using SpaceTimeMat = std::function<Mat2(Vec2, double)>;

/// Manufactured-solution problem on the unit-square channel pair
/// Ω_F = (0,1)×(0,½), Ω_S = (0,1)×(½,1): exact fields, their gradients, and
/// the hand-derived forcing closures. Fluid fields are Eulerian; solid
/// fields are referential.
struct MmsProblem {
  bool moving = false;
  MaterialParams mat;  // unit parameters, λ_S configurable

  SpaceTimeVec eta, xi, v, w, eta_f;
  SpaceTimeScal p;
  SpaceTimeMat grad_v, grad_eta, grad_eta_f;

  SpaceTimeVec f_f, f_s, f_d;
  SpaceTimeScal s;

  /// Interface traction per unit reference length, J σ_F F^{-T} n̂ with
  /// n̂ = (0,1) on Γ̂ (reduces to σ_F n̂ on fixed domains).
  SpaceTimeVec reference_traction;

  Forcing forcing() const;
};

/// Fixed-domain problem (Stokes + elastodynamics with sources).
MmsProblem example1_problem(double lambda_s);

/// Moving-domain problem: same exact fields, η_F = η, w = ∂t η_F, forced
/// harmonic extension and ALE-consistent fluid forcing.
MmsProblem example2_problem(double lambda_s);

}  // namespace robinfsi
