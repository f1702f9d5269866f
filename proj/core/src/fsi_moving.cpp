#include "robinfsi/fsi_moving.hpp"

#include <cmath>

#include "robinfsi/errors.hpp"
#include "robinfsi/norms.hpp"

namespace robinfsi {

namespace {

double iface_max_disp(const FsiSetup& su, const FEFunction& eta) {
  double m = 0.0;
  for (size_t k = 0; k < su.coupling.solid_sdofs.size(); ++k) {
    const int sd = su.coupling.solid_sdofs[k];
    const Vec2 d{eta.coeffs[su.vs->dof(sd, 0)], eta.coeffs[su.vs->dof(sd, 1)]};
    m = std::max(m, norm(d));
  }
  return m;
}

}  // namespace

MovingFsiSolver::MovingFsiSolver(const Mesh& fluid, const Mesh& solid,
                                 const InterfaceMap& imap,
                                 const MaterialParams& mat,
                                 const SchemeConfig& cfg, Forcing forcing)
    : mat_(mat),
      cfg_(cfg),
      forcing_(std::move(forcing)),
      setup_(fluid, solid, imap, cfg),
      structure_(setup_, mat, cfg),
      ale_(fluid),
      h_(max_diameter(fluid)) {
  structure_.forcing = &forcing_;
}

MovingFsiState MovingFsiSolver::zero_state() const {
  MovingFsiState s;
  s.v = FEFunction(*setup_.vf);
  s.p = FEFunction(*setup_.qf);
  s.xi = FEFunction(*setup_.vs);
  s.eta = FEFunction(*setup_.vs);
  s.traction.dual.assign(setup_.vf->n_dofs(), 0.0);
  s.ale = initial_geometry(ale_, FEFunction(ale_.space()), cfg_.j_min, cfg_.j_max);
  return s;
}

namespace {

/// Interface displacement samples for the extension, in the ALE solver's
/// interface-node order, taken from the solid displacement trace.
std::vector<Vec2> interface_trace(const FsiSetup& su, const AleSolver& ale,
                                  const FEFunction& eta) {
  std::vector<Vec2> out(ale.interface_node_ids().size());
  for (size_t k = 0; k < out.size(); ++k) {
    const int fnode = ale.interface_node_ids()[k];
    int snode = -1;
    for (size_t j = 0; j < su.coupling.fluid_sdofs.size(); ++j)
      if (su.coupling.fluid_sdofs[j] == fnode) {
        snode = su.coupling.solid_sdofs[j];
        break;
      }
    if (snode < 0) fail(ErrorCode::ValidationError, "unpaired interface node");
    out[k] = {eta.coeffs[su.vs->dof(snode, 0)], eta.coeffs[su.vs->dof(snode, 1)]};
  }
  return out;
}

}  // namespace

MovingFsiState MovingFsiSolver::initial_state(const VectorField& v0,
                                              const ScalarField& p0,
                                              const VectorField& xi0,
                                              const VectorField& eta0,
                                              const VectorField* traction0,
                                              const VectorField* f_d0) const {
  MovingFsiState s = zero_state();
  s.xi = interpolate(*setup_.vs, *setup_.solid_ref, xi0);
  s.eta = interpolate(*setup_.vs, *setup_.solid_ref, eta0);
  if (!cfg_.freeze_geometry) {
    const auto trace = interface_trace(setup_, ale_, s.eta);
    const FEFunction eta_f0 = ale_.extend(trace, f_d0);
    s.ale = initial_geometry(ale_, eta_f0, cfg_.j_min, cfg_.j_max);
  }
  s.v = interpolate(*setup_.vf, s.ale.mesh_curr, v0);
  s.p = interpolate(*setup_.qf, s.ale.mesh_curr, p0);
  if (traction0) s.traction = traction_from_closure(setup_, *traction0, 0);
  return s;
}

FEFunction MovingFsiSolver::structure_substep(const MovingFsiState& s) const {
  return structure_.substep(s.xi, s.eta, s.v, s.traction, s.t + cfg_.dt);
}

AleState MovingFsiSolver::geometry_substep(const MovingFsiState& s,
                                           const FEFunction& eta_new) const {
  const double t_new = s.t + cfg_.dt;
  const auto trace = interface_trace(setup_, ale_, eta_new);
  VectorField fd;
  const VectorField* fd_ptr = nullptr;
  if (forcing_.f_d) {
    const auto f = forcing_.f_d;
    fd = [f, t_new](Vec2 x) { return f(x, t_new); };
    fd_ptr = &fd;
  }
  const FEFunction eta_f = ale_.extend(trace, fd_ptr);
  return advance_geometry(ale_, s.ale, eta_f, cfg_.dt, cfg_.j_min, cfg_.j_max);
}

EnergyRow MovingFsiSolver::energy_row(const MovingFsiState& s) const {
  EnergyRow r;
  r.t = s.t;
  const double vnorm = l2_norm(s.v, s.ale.mesh_curr);
  r.e = 0.5 * mat_.rho_f * vnorm * vnorm +
        quadratic_energy(structure_.mass(), s.xi.coeffs) +
        quadratic_energy(structure_.stiffness(), s.eta.coeffs);
  r.n1 = 0.5 * cfg_.alpha * cfg_.dt * setup_.gamma_norms.norm_sq(s.v.coeffs) +
         0.5 * cfg_.dt / cfg_.alpha *
             setup_.gamma_norms.dual_norm_sq(s.traction.dual);
  r.g = r.e + r.n1;
  r.iface_max_disp = iface_max_disp(setup_, s.eta);
  r.min_j = s.ale.min_j;
  return r;
}

bool MovingFsiSolver::dt_condition_satisfied() const {
  return cfg_.dt <= cfl_dt_bound(mat_.rho_f, cfg_.alpha, cfg_.c_ti_estimate,
                                 velocity_degree(cfg_.elements), h_);
}

MovingFsiState MovingFsiSolver::step(const MovingFsiState& s,
                                     EnergyLog* log) const {
  const double t_new = s.t + cfg_.dt;
  MovingFsiState next;
  next.t = t_new;
  next.n = s.n + 1;

  // 1. structure sub-problem (reference domain, lagged traction)
  next.xi = structure_substep(s);
  next.eta = s.eta;
  axpy(cfg_.dt, next.xi.coeffs, next.eta.coeffs);

  // 2. geometry sub-problem
  if (cfg_.freeze_geometry) {
    next.ale = s.ale;
    next.ale.mesh_prev = s.ale.mesh_curr;
    next.ale.mesh_half = s.ale.mesh_curr;
    next.ale.w = FEFunction(ale_.space());
  } else {
    next.ale = geometry_substep(s, next.eta);
  }

  // 3. fluid sub-problem on the snapshot triple
  FEFunction advecting;
  const FEFunction* adv_ptr = nullptr;
  if (cfg_.convection) {
    advecting = interface_velocity_override(s.v, next.ale.w);
    adv_ptr = &advecting;
  }
  FluidSnapshots snaps{&s.ale.mesh_curr, &next.ale.mesh_half, &next.ale.mesh_curr};
  FluidOperator ops(setup_, mat_, cfg_, snaps, adv_ptr,
                    cfg_.convection ? &next.ale.w : nullptr, &forcing_, t_new);
  auto [v_new, p_new] = ops.solve(s.v, next.xi, s.traction);
  next.v = std::move(v_new);
  next.p = std::move(p_new);
  next.traction = ops.recover_traction(s.v, next.v, next.p, next.n);

  double gcl = 0.0;
  if (cfg_.check_gcl && !cfg_.freeze_geometry)
    gcl = gcl_check(next.v, s.ale.mesh_curr, next.ale.mesh_half,
                    next.ale.mesh_curr, next.ale.w, cfg_.dt);

  if (log) {
    if (log->rows.empty()) log->rows.push_back(energy_row(s));
    const EnergyRow& prev = log->rows.back();
    EnergyRow r = energy_row(next);
    r.gcl_residual = gcl;
    r.d = prev.d +
          cfg_.dt * 0.5 * dot(next.v.coeffs, ops.viscous() * next.v.coeffs);
    std::vector<double> xid = next.xi.coeffs, etad = next.eta.coeffs,
                        vd = next.v.coeffs;
    axpy(-1.0, s.xi.coeffs, xid);
    axpy(-1.0, s.eta.coeffs, etad);
    axpy(-1.0, s.v.coeffs, vd);
    std::vector<double> robin_gap(setup_.vf->n_dofs(), 0.0);
    setup_.coupling.scatter_to_fluid(next.xi.coeffs, robin_gap);
    axpy(-1.0, s.v.coeffs, robin_gap);
    r.n2 = prev.n2 + quadratic_energy(structure_.mass(), xid) +
           quadratic_energy(structure_.stiffness(), etad) +
           quadratic_energy(ops.mass_old(), vd) +
           0.5 * cfg_.alpha * cfg_.dt * setup_.gamma_norms.norm_sq(robin_gap);
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

MovingFsiState run_moving(const MovingFsiSolver& solver, MovingFsiState state,
                          int nsteps, EnergyLog* log) {
  for (int k = 0; k < nsteps; ++k) state = solver.step(state, log);
  return state;
}

}  // namespace robinfsi
