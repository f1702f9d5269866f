#include "robinfsi/monolithic.hpp"

#include <cmath>

#include "robinfsi/errors.hpp"
#include "robinfsi/norms.hpp"

namespace robinfsi {

MonolithicSolver::MonolithicSolver(const Mesh& fluid, const Mesh& solid,
                                   const InterfaceMap& imap,
                                   const MaterialParams& mat,
                                   const SchemeConfig& cfg, Forcing forcing)
    : mat_(mat),
      cfg_(cfg),
      forcing_(std::move(forcing)),
      setup_(fluid, solid, imap, cfg),
      ale_(fluid),
      global_bc_(0) {
  ms_ = assemble_mass(*setup_.vs, mat.rho_s, solid);
  ks_ = assemble_elasticity(*setup_.vs, mat.mu_s, mat.lambda_s, mat.gamma);

  const int nv = setup_.vf->n_dofs(), np = setup_.qf->n_dofs();
  const int ns = setup_.vs->n_dofs();
  solid_to_global_.assign(ns, -1);
  for (size_t k = 0; k < setup_.coupling.solid_dofs.size(); ++k)
    solid_to_global_[setup_.coupling.solid_dofs[k]] =
        setup_.coupling.fluid_dofs[k];
  int next = nv + np;
  for (int i = 0; i < ns; ++i)
    if (solid_to_global_[i] < 0) solid_to_global_[i] = next++;
  n_global_ = next;

  global_bc_ = DirichletSet(n_global_);
  for (int i = 0; i < nv; ++i)
    if (setup_.fluid_bc.constrained(i)) global_bc_.set(i, 0.0);
  for (int i = 0; i < ns; ++i)
    if (setup_.solid_bc.constrained(i)) global_bc_.set(solid_to_global_[i], 0.0);
}

MonolithicState MonolithicSolver::zero_state() const {
  MonolithicState s;
  s.v = FEFunction(*setup_.vf);
  s.p = FEFunction(*setup_.qf);
  s.xi = FEFunction(*setup_.vs);
  s.eta = FEFunction(*setup_.vs);
  s.ale = initial_geometry(ale_, FEFunction(ale_.space()), cfg_.j_min, cfg_.j_max);
  return s;
}

double MonolithicSolver::interface_velocity_gap(const MonolithicState& s) const {
  double gap = 0.0;
  for (size_t k = 0; k < setup_.coupling.fluid_dofs.size(); ++k)
    gap = std::max(gap, std::abs(s.v.coeffs[setup_.coupling.fluid_dofs[k]] -
                                 s.xi.coeffs[setup_.coupling.solid_dofs[k]]));
  return gap;
}

EnergyRow MonolithicSolver::energy_row(const MonolithicState& s) const {
  EnergyRow r;
  r.t = s.t;
  const double vnorm = l2_norm(s.v, s.ale.mesh_curr);
  r.e = 0.5 * mat_.rho_f * vnorm * vnorm + quadratic_energy(ms_, s.xi.coeffs) +
        quadratic_energy(ks_, s.eta.coeffs);
  r.g = r.e;
  r.min_j = s.ale.min_j;
  for (size_t k = 0; k < setup_.coupling.solid_sdofs.size(); ++k) {
    const int sd = setup_.coupling.solid_sdofs[k];
    const Vec2 d{s.eta.coeffs[setup_.vs->dof(sd, 0)],
                 s.eta.coeffs[setup_.vs->dof(sd, 1)]};
    r.iface_max_disp = std::max(r.iface_max_disp, norm(d));
  }
  return r;
}

MonolithicState MonolithicSolver::step(const MonolithicState& s,
                                       EnergyLog* log) const {
  const double t_new = s.t + cfg_.dt;
  const FESpace& vf = *setup_.vf;
  const FESpace& qf = *setup_.qf;
  const FESpace& vs = *setup_.vs;
  const int nv = vf.n_dofs(), np = qf.n_dofs(), ns = vs.n_dofs();
  const Mesh& cur = s.ale.mesh_curr;

  // level-n geometry for every fluid operator
  SparseMatrix mass = assemble_mass(vf, mat_.rho_f, cur);
  SparseMatrix visc = assemble_fluid_viscous(vf, mat_.mu_f, cur);
  SparseMatrix div = assemble_divergence(vf, qf, cur);
  SparseMatrix conv, b_dp;
  if (cfg_.convection && !cfg_.freeze_geometry) {
    ScalarField src;
    const ScalarField* src_ptr = nullptr;
    if (forcing_.s) {
      const auto s_fn = forcing_.s;
      const double t_old = s.t;
      src = [s_fn, t_old](Vec2 x) { return s_fn(x, t_old); };
      src_ptr = &src;
    }
    conv = assemble_ale_convection(vf, cur, mat_.rho_f, s.v, &s.ale.w, src_ptr);
    if (cfg_.bc == BcVariant::DynamicPressure)
      b_dp = assemble_directional_boundary(
          vf, {BoundaryTag::Inlet, BoundaryTag::Outlet}, cur, s.v, mat_.rho_f);
  } else if (cfg_.convection) {
    conv = assemble_ale_convection(vf, cur, mat_.rho_f, s.v, nullptr, nullptr);
  }

  TripletList k;
  k.add_block(mass, 0, 0, 1.0 / cfg_.dt);
  k.add_block(visc, 0, 0, 1.0);
  if (conv.rows() > 0) k.add_block(conv, 0, 0, 1.0);
  if (b_dp.rows() > 0) k.add_block(b_dp, 0, 0, -1.0);
  k.add_block_transposed(div, 0, nv, -1.0);
  k.add_block(div, nv, 0, 1.0);

  // solid blocks scattered through the merged dof map
  auto scatter_solid = [&](const SparseMatrix& a, double scale) {
    const auto ro = a.row_offsets();
    const auto ci = a.col_indices();
    const auto v = a.values();
    for (int i = 0; i < a.rows(); ++i)
      for (int kk = ro[i]; kk < ro[i + 1]; ++kk)
        k.add(solid_to_global_[i], solid_to_global_[ci[kk]], scale * v[kk]);
  };
  scatter_solid(ms_, 1.0 / cfg_.dt);
  scatter_solid(ks_, cfg_.dt);

  SparseMatrix k_glob = std::move(k).compress(n_global_, n_global_);

  std::vector<double> rhs(n_global_, 0.0);
  {
    std::span<double> rv(rhs.data(), nv);
    mass.multiply_add(s.v.coeffs, rv, 1.0 / cfg_.dt);
    if (forcing_.p_in) {
      const double pv = forcing_.p_in(t_new);
      const auto l = assemble_neumann_load(
          vf, BoundaryTag::Inlet, [pv](Vec2) { return pv; }, cur);
      axpy(1.0, l, rv);
    }
    if (forcing_.p_out) {
      const double pv = forcing_.p_out(t_new);
      const auto l = assemble_neumann_load(
          vf, BoundaryTag::Outlet, [pv](Vec2) { return pv; }, cur);
      axpy(1.0, l, rv);
    }
    if (forcing_.f_f) {
      const auto f = forcing_.f_f;
      const auto l = assemble_vector_load(
          vf, cur, [&, t_new](Vec2 x) { return f(x, t_new); });
      axpy(1.0, l, rv);
    }
    if (forcing_.s) {
      const auto s_fn = forcing_.s;
      const auto l = assemble_scalar_load(
          qf, cur, [&, t_new](Vec2 x) { return s_fn(x, t_new); });
      for (int i = 0; i < np; ++i) rhs[nv + i] += l[i];
    }
    std::vector<double> rs(ns, 0.0);
    ms_.multiply_add(s.xi.coeffs, rs, 1.0 / cfg_.dt);
    ks_.multiply_add(s.eta.coeffs, rs, -1.0);
    if (forcing_.f_s) {
      const auto f = forcing_.f_s;
      const auto l = assemble_vector_load(
          vs, *setup_.solid_ref, [&, t_new](Vec2 x) { return f(x, t_new); });
      axpy(1.0, l, rs);
    }
    for (int i = 0; i < ns; ++i) rhs[solid_to_global_[i]] += rs[i];
  }

  apply_dirichlet(k_glob, rhs, global_bc_);
  Factorization fac(k_glob);
  const std::vector<double> x = fac.solve(rhs);
  const double res = relative_residual(k_glob, x, rhs);
  if (res > 1e-10)
    fail(ErrorCode::Singular, "monolithic solve residual " + std::to_string(res));

  MonolithicState next;
  next.t = t_new;
  next.n = s.n + 1;
  next.v = FEFunction(vf);
  next.p = FEFunction(qf);
  next.xi = FEFunction(vs);
  next.eta = s.eta;
  std::copy(x.begin(), x.begin() + nv, next.v.coeffs.begin());
  std::copy(x.begin() + nv, x.begin() + nv + np, next.p.coeffs.begin());
  for (int i = 0; i < ns; ++i) next.xi.coeffs[i] = x[solid_to_global_[i]];
  axpy(cfg_.dt, next.xi.coeffs, next.eta.coeffs);

  // geometry update from the new interface displacement
  if (cfg_.freeze_geometry) {
    next.ale = s.ale;
    next.ale.mesh_prev = s.ale.mesh_curr;
    next.ale.mesh_half = s.ale.mesh_curr;
    next.ale.w = FEFunction(ale_.space());
  } else {
    std::vector<Vec2> trace(ale_.interface_node_ids().size());
    for (size_t kk = 0; kk < trace.size(); ++kk) {
      const int fnode = ale_.interface_node_ids()[kk];
      int snode = -1;
      for (size_t j = 0; j < setup_.coupling.fluid_sdofs.size(); ++j)
        if (setup_.coupling.fluid_sdofs[j] == fnode) {
          snode = setup_.coupling.solid_sdofs[j];
          break;
        }
      trace[kk] = {next.eta.coeffs[vs.dof(snode, 0)],
                   next.eta.coeffs[vs.dof(snode, 1)]};
    }
    VectorField fd;
    const VectorField* fd_ptr = nullptr;
    if (forcing_.f_d) {
      const auto f = forcing_.f_d;
      fd = [f, t_new](Vec2 xq) { return f(xq, t_new); };
      fd_ptr = &fd;
    }
    const FEFunction eta_f = ale_.extend(trace, fd_ptr);
    next.ale = advance_geometry(ale_, s.ale, eta_f, cfg_.dt, cfg_.j_min, cfg_.j_max);
  }

  if (log) {
    if (log->rows.empty()) log->rows.push_back(energy_row(s));
    const EnergyRow& prev = log->rows.back();
    EnergyRow r = energy_row(next);
    r.d = prev.d + cfg_.dt * 0.5 * dot(next.v.coeffs, visc * next.v.coeffs);
    std::vector<double> xid = next.xi.coeffs, etad = next.eta.coeffs,
                        vd = next.v.coeffs;
    axpy(-1.0, s.xi.coeffs, xid);
    axpy(-1.0, s.eta.coeffs, etad);
    axpy(-1.0, s.v.coeffs, vd);
    r.n2 = prev.n2 + quadratic_energy(ms_, xid) + quadratic_energy(ks_, etad) +
           quadratic_energy(mass, vd);
    double src = 0.0;
    if (forcing_.p_in) src += forcing_.p_in(t_new) * forcing_.p_in(t_new) * setup_.len_in;
    if (forcing_.p_out)
      src += forcing_.p_out(t_new) * forcing_.p_out(t_new) * setup_.len_out;
    const double c2 = cfg_.c_ti_estimate * cfg_.c_ti_estimate;
    r.sources = prev.sources + cfg_.dt * c2 / (2.0 * mat_.mu_f) * src;
    log->rows.push_back(r);
  }
  return next;
}

MonolithicState run_monolithic(const MonolithicSolver& solver,
                               MonolithicState state, int nsteps,
                               EnergyLog* log) {
  for (int k = 0; k < nsteps; ++k) state = solver.step(state, log);
  return state;
}

}  // namespace robinfsi
