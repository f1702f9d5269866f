#include "robinfsi/fsi_common.hpp"

#include <algorithm>
#include <cmath>

#include "robinfsi/errors.hpp"

namespace robinfsi {

int velocity_degree(ElementChoice e) {
  return e == ElementChoice::TaylorHoodP2P1 ? 2 : 1;
}

double cfl_dt_bound(double rho_f, double alpha, double c_ti, int k, double h) {
  return rho_f * h / (alpha * c_ti * k * k);
}

bool EnergyLog::non_increasing(double slack_rel) const {
  return max_step_increase() <= slack_rel * (rows.empty() ? 0.0 : rows.front().g);
}

double EnergyLog::max_step_increase() const {
  double worst = -1e300;
  for (size_t n = 1; n < rows.size(); ++n) {
    const double src_inc = rows[n].sources - rows[n - 1].sources;
    worst = std::max(worst, rows[n].g - rows[n - 1].g - src_inc);
  }
  return rows.size() < 2 ? 0.0 : worst;
}

double quadratic_energy(const SparseMatrix& m, std::span<const double> x) {
  std::vector<double> y = m * x;
  return 0.5 * dot(x, y);
}

namespace {

FESpace* make_velocity_space(const Mesh& m, ElementChoice e) {
  return new FESpace(m, e == ElementChoice::MiniP1 ? Family::P1Bubble : Family::P2, 2);
}

FESpace* make_solid_space(const Mesh& m, ElementChoice e) {
  return new FESpace(m, e == ElementChoice::MiniP1 ? Family::P1 : Family::P2, 2);
}

double tagged_length(const Mesh& m, BoundaryTag tag) {
  double len = 0.0;
  for (const auto& e : m.boundary)
    if (e.tag == tag) len += norm(m.nodes[e.b] - m.nodes[e.a]);
  return len;
}

}  // namespace

FsiSetup::FsiSetup(const Mesh& fluid, const Mesh& solid,
                   const InterfaceMap& imap, const SchemeConfig& cfg)
    : fluid_ref(&fluid),
      solid_ref(&solid),
      vf(make_velocity_space(fluid, cfg.elements)),
      qf(new FESpace(fluid, Family::P1, 1)),
      vs(make_solid_space(solid, cfg.elements)),
      coupling(build_interface_coupling(*vf, *vs, imap)),
      fluid_bc(vf->n_dofs()),
      solid_bc(vs->n_dofs()) {
  // fluid outer boundary
  if (cfg.io_noslip) {
    add_boundary_dirichlet(fluid_bc, *vf, {BoundaryTag::Inlet, BoundaryTag::Outlet},
                           {0, 1});
  } else if (cfg.bc == BcVariant::DynamicPressure) {
    // v × n = 0 on vertical inlet/outlet sections
    add_boundary_dirichlet(fluid_bc, *vf, {BoundaryTag::Inlet, BoundaryTag::Outlet},
                           {1});
    // pin the interface endpoints so both sides of Γ̂ carry matching
    // constraints (the structure is clamped there)
    for (const auto& e : fluid.boundary) {
      if (e.tag != BoundaryTag::Interface) continue;
      for (int node : {e.a, e.b})
        for (const auto& e2 : fluid.boundary)
          if (e2.tag != BoundaryTag::Interface && (e2.a == node || e2.b == node))
            for (int c : {0, 1}) fluid_bc.set(vf->dof(node, c), 0.0);
    }
  }
  switch (cfg.wall) {
    case WallBc::NoSlip:
      add_boundary_dirichlet(fluid_bc, *vf, {BoundaryTag::FluidWall}, {0, 1});
      break;
    case WallBc::Symmetry:
      add_boundary_dirichlet(fluid_bc, *vf, {BoundaryTag::FluidWall}, {1});
      break;
    case WallBc::Neumann:
      break;
  }

  // solid boundary
  add_boundary_dirichlet(solid_bc, *vs, {BoundaryTag::SolidClamped}, {0, 1});
  if (cfg.clamp_solid_external)
    add_boundary_dirichlet(solid_bc, *vs, {BoundaryTag::SolidExternal}, {0, 1});

  for (int d : coupling.fluid_dofs)
    if (!fluid_bc.constrained(d)) active_iface.push_back(d);
  gamma_norms = InterfaceNorms(coupling, active_iface);

  len_in = tagged_length(fluid, BoundaryTag::Inlet);
  len_out = tagged_length(fluid, BoundaryTag::Outlet);
}

StructureOperator::StructureOperator(const FsiSetup& setup,
                                     const MaterialParams& mat,
                                     const SchemeConfig& cfg)
    : setup_(&setup), mat_(mat), cfg_(cfg) {
  ms_ = assemble_mass(*setup.vs, mat.rho_s, *setup.solid_ref);
  ks_ = assemble_elasticity(*setup.vs, mat.mu_s, mat.lambda_s, mat.gamma);

  TripletList lhs;
  lhs.add_block(ms_, 0, 0, 1.0 / cfg.dt);
  lhs.add_block(ks_, 0, 0, cfg.dt);
  lhs.add_block(setup.coupling.mg_solid, 0, 0, cfg.alpha);
  lhs_elim_ = std::move(lhs).compress(setup.vs->n_dofs(), setup.vs->n_dofs());
  std::vector<double> dummy(setup.vs->n_dofs(), 0.0);
  apply_dirichlet(lhs_elim_, dummy, setup.solid_bc);
  fac_ = std::make_unique<Factorization>(lhs_elim_);
}

FEFunction StructureOperator::substep(const FEFunction& xi_old,
                                      const FEFunction& eta_old,
                                      const FEFunction& v_old,
                                      const TractionTrace& traction,
                                      double t_new) const {
  const FsiSetup& su = *setup_;
  const int n = su.vs->n_dofs();

  std::vector<double> rhs(n, 0.0);
  ms_.multiply_add(xi_old.coeffs, rhs, 1.0 / cfg_.dt);
  ks_.multiply_add(eta_old.coeffs, rhs, -1.0);

  // α ∫_Γ̂ v^n · ζ : fluid trace carried over through the dof pairing
  std::vector<double> v_on_solid(n, 0.0);
  su.coupling.scatter_to_solid(v_old.coeffs, v_on_solid);
  su.coupling.mg_solid.multiply_add(v_on_solid, rhs, cfg_.alpha);

  // − lagged traction functional
  su.coupling.scatter_to_solid(traction.dual, rhs, -1.0);

  if (forcing && forcing->f_s) {
    const auto f = forcing->f_s;
    const auto load = assemble_vector_load(
        *su.vs, *su.solid_ref, [&](Vec2 x) { return f(x, t_new); });
    axpy(1.0, load, rhs);
  }

  apply_dirichlet_rhs_only(rhs, su.solid_bc);
  FEFunction xi(*su.vs);
  xi.coeffs = fac_->solve(rhs);
  return xi;
}

FluidOperator::FluidOperator(const FsiSetup& setup, const MaterialParams& mat,
                             const SchemeConfig& cfg,
                             const FluidSnapshots& meshes,
                             const FEFunction* advecting, const FEFunction* w,
                             const Forcing* forcing, double t_new)
    : setup_(&setup), mat_(mat), cfg_(cfg), t_new_(t_new) {
  const FESpace& vf = *setup.vf;
  const FESpace& qf = *setup.qf;
  const int nv = vf.n_dofs(), np = qf.n_dofs();

  mass_old_ = assemble_mass(vf, mat.rho_f, *meshes.mesh_old);
  visc_ = assemble_fluid_viscous(vf, mat.mu_f, *meshes.mesh_new);
  div_ = assemble_divergence(vf, qf, *meshes.mesh_new);
  if (advecting) {
    ScalarField src;
    const ScalarField* src_ptr = nullptr;
    if (forcing && forcing->s) {
      const double t_old = t_new - cfg.dt;
      const auto s_fn = forcing->s;
      src = [s_fn, t_old](Vec2 x) { return s_fn(x, t_old); };
      src_ptr = &src;
    }
    conv_ = assemble_ale_convection(vf, *meshes.mesh_half, mat.rho_f,
                                    *advecting, w, src_ptr);
  }
  if (cfg.bc == BcVariant::DynamicPressure && advecting) {
    b_dp_ = assemble_directional_boundary(
        vf, {BoundaryTag::Inlet, BoundaryTag::Outlet}, *meshes.mesh_new,
        *advecting, mat.rho_f);
  }

  TripletList k;
  k.add_block(mass_old_, 0, 0, 1.0 / cfg.dt);
  k.add_block(visc_, 0, 0, 1.0);
  if (conv_.rows() > 0) k.add_block(conv_, 0, 0, 1.0);
  k.add_block(setup.coupling.mg_fluid, 0, 0, cfg.alpha);
  if (b_dp_.rows() > 0) k.add_block(b_dp_, 0, 0, -1.0);
  k.add_block_transposed(div_, 0, nv, -1.0);  // −Bᵀ p
  k.add_block(div_, nv, 0, 1.0);              // +B v
  k_orig_ = std::move(k).compress(nv + np, nv + np);

  // external loads at t^{n+1}
  loads_v_.assign(nv, 0.0);
  if (forcing) {
    if (forcing->p_in) {
      const double pv = forcing->p_in(t_new);
      const auto l = assemble_neumann_load(
          vf, BoundaryTag::Inlet, [pv](Vec2) { return pv; }, *meshes.mesh_new);
      axpy(1.0, l, loads_v_);
    }
    if (forcing->p_out) {
      const double pv = forcing->p_out(t_new);
      const auto l = assemble_neumann_load(
          vf, BoundaryTag::Outlet, [pv](Vec2) { return pv; }, *meshes.mesh_new);
      axpy(1.0, l, loads_v_);
    }
    if (forcing->f_f) {
      const auto f = forcing->f_f;
      const auto l = assemble_vector_load(
          vf, *meshes.mesh_new, [&, t_new](Vec2 x) { return f(x, t_new); });
      axpy(1.0, l, loads_v_);
    }
  }
  loads_p_.assign(np, 0.0);
  if (forcing && forcing->s) {
    const auto s_fn = forcing->s;
    loads_p_ = assemble_scalar_load(
        qf, *meshes.mesh_new, [&, t_new](Vec2 x) { return s_fn(x, t_new); });
  }

  // eliminate fluid Dirichlet dofs (velocity block only)
  DirichletSet full = setup.fluid_bc.shifted(0, nv + np);
  k_elim_ = k_orig_;
  std::vector<double> dummy(nv + np, 0.0);
  apply_dirichlet(k_elim_, dummy, full);
  fac_ = std::make_unique<Factorization>(k_elim_);
}

std::pair<FEFunction, FEFunction> FluidOperator::solve(
    const FEFunction& v_old, const FEFunction& xi_new,
    const TractionTrace& traction) const {
  const FsiSetup& su = *setup_;
  const int nv = su.vf->n_dofs(), np = su.qf->n_dofs();
  std::vector<double> rhs(nv + np, 0.0);

  std::span<double> rv(rhs.data(), nv);
  mass_old_.multiply_add(v_old.coeffs, rv, 1.0 / cfg_.dt);

  std::vector<double> xi_on_fluid(nv, 0.0);
  su.coupling.scatter_to_fluid(xi_new.coeffs, xi_on_fluid);
  su.coupling.mg_fluid.multiply_add(xi_on_fluid, rv, cfg_.alpha);

  axpy(1.0, traction.dual, rv);
  axpy(1.0, loads_v_, rv);
  for (int i = 0; i < np; ++i) rhs[nv + i] = loads_p_[i];

  DirichletSet full = su.fluid_bc.shifted(0, nv + np);
  apply_dirichlet_rhs_only(rhs, full);

  const std::vector<double> x = fac_->solve(rhs);
  const double res = relative_residual(k_elim_, x, rhs);
  if (res > 1e-10)
    fail(ErrorCode::Singular, "fluid solve residual " + std::to_string(res));

  FEFunction v(*su.vf), p(*su.qf);
  std::copy(x.begin(), x.begin() + nv, v.coeffs.begin());
  std::copy(x.begin() + nv, x.end(), p.coeffs.begin());
  return {std::move(v), std::move(p)};
}

TractionTrace FluidOperator::recover_traction(const FEFunction& v_old,
                                              const FEFunction& v_new,
                                              const FEFunction& p_new,
                                              int level) const {
  const FsiSetup& su = *setup_;
  const int nv = su.vf->n_dofs(), np = su.qf->n_dofs();
  std::vector<double> x(nv + np, 0.0);
  std::copy(v_new.coeffs.begin(), v_new.coeffs.end(), x.begin());
  std::copy(p_new.coeffs.begin(), p_new.coeffs.end(), x.begin() + nv);

  const std::vector<double> kx = k_orig_ * x;
  std::vector<double> mv = mass_old_ * v_old.coeffs;
  std::vector<double> mgv = su.coupling.mg_fluid * v_new.coeffs;

  TractionTrace t;
  t.level = level;
  t.dual.assign(nv, 0.0);
  for (int d : su.active_iface)
    t.dual[d] = kx[d] - mv[d] / cfg_.dt - cfg_.alpha * mgv[d] - loads_v_[d];
  return t;
}

TractionTrace traction_from_closure(const FsiSetup& setup,
                                    const VectorField& traction, int level) {
  const auto load = assemble_boundary_vector_load(
      *setup.vf, BoundaryTag::Interface, *setup.fluid_ref, traction);
  TractionTrace t;
  t.level = level;
  t.dual.assign(setup.vf->n_dofs(), 0.0);
  for (int d : setup.active_iface) t.dual[d] = load[d];
  return t;
}

}  // namespace robinfsi
