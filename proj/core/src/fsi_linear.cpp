#include "robinfsi/fsi_linear.hpp"

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

LinearFsiSolver::LinearFsiSolver(const Mesh& fluid, const Mesh& solid,
                                 const InterfaceMap& imap,
                                 const MaterialParams& mat,
                                 const SchemeConfig& cfg, Forcing forcing)
    : mat_(mat),
      cfg_(cfg),
      forcing_(std::move(forcing)),
      setup_(fluid, solid, imap, cfg),
      structure_(setup_, mat, cfg),
      h_(max_diameter(fluid)) {
  structure_.forcing = &forcing_;
  FluidSnapshots snaps{&fluid, &fluid, &fluid};
  fluid_ = std::make_unique<FluidOperator>(setup_, mat, cfg_, snaps, nullptr,
                                           nullptr, &forcing_, cfg.dt);
  mass_ref_ = assemble_mass(*setup_.vf, mat.rho_f, fluid);
}

LinearFsiState LinearFsiSolver::zero_state() const {
  LinearFsiState s;
  s.v = FEFunction(*setup_.vf);
  s.p = FEFunction(*setup_.qf);
  s.xi = FEFunction(*setup_.vs);
  s.eta = FEFunction(*setup_.vs);
  s.traction.dual.assign(setup_.vf->n_dofs(), 0.0);
  return s;
}

LinearFsiState LinearFsiSolver::initial_state(const VectorField& v0,
                                              const ScalarField& p0,
                                              const VectorField& xi0,
                                              const VectorField& eta0,
                                              const VectorField* traction0) const {
  LinearFsiState s = zero_state();
  s.v = interpolate(*setup_.vf, *setup_.fluid_ref, v0);
  s.p = interpolate(*setup_.qf, *setup_.fluid_ref, p0);
  s.xi = interpolate(*setup_.vs, *setup_.solid_ref, xi0);
  s.eta = interpolate(*setup_.vs, *setup_.solid_ref, eta0);
  if (traction0) s.traction = traction_from_closure(setup_, *traction0, 0);
  return s;
}

FEFunction LinearFsiSolver::structure_substep(const LinearFsiState& s) const {
  return structure_.substep(s.xi, s.eta, s.v, s.traction, s.t + cfg_.dt);
}

std::pair<FEFunction, FEFunction> LinearFsiSolver::fluid_substep(
    const LinearFsiState& s, const FEFunction& xi_new) const {
  return fluid_->solve(s.v, xi_new, s.traction);
}

bool LinearFsiSolver::dt_condition_satisfied() const {
  return cfg_.dt <= cfl_dt_bound(mat_.rho_f, cfg_.alpha, cfg_.c_ti_estimate,
                                 velocity_degree(cfg_.elements), h_);
}

EnergyRow LinearFsiSolver::energy_row(const LinearFsiState& s) const {
  EnergyRow r;
  r.t = s.t;
  r.e = quadratic_energy(mass_ref_, s.v.coeffs) +
        quadratic_energy(structure_.mass(), s.xi.coeffs) +
        quadratic_energy(structure_.stiffness(), s.eta.coeffs);
  r.n1 = 0.5 * cfg_.alpha * cfg_.dt * setup_.gamma_norms.norm_sq(s.v.coeffs) +
         0.5 * cfg_.dt / cfg_.alpha * setup_.gamma_norms.dual_norm_sq(s.traction.dual);
  r.g = r.e + r.n1;
  r.iface_max_disp = iface_max_disp(setup_, s.eta);
  return r;
}

LinearFsiState LinearFsiSolver::step(const LinearFsiState& s,
                                     EnergyLog* log) const {
  LinearFsiState next;
  next.t = s.t + cfg_.dt;
  next.n = s.n + 1;

  next.xi = structure_substep(s);
  next.eta = s.eta;
  axpy(cfg_.dt, next.xi.coeffs, next.eta.coeffs);

  auto [v_new, p_new] = fluid_substep(s, next.xi);
  next.v = std::move(v_new);
  next.p = std::move(p_new);
  next.traction = fluid_->recover_traction(s.v, next.v, next.p, next.n);

  if (log) {
    if (log->rows.empty()) log->rows.push_back(energy_row(s));
    const EnergyRow& prev = log->rows.back();
    EnergyRow r = energy_row(next);
    r.d = prev.d + cfg_.dt * 0.5 *
                       dot(next.v.coeffs, fluid_->viscous() * next.v.coeffs);
    // numerical dissipation increments
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
           quadratic_energy(mass_ref_, vd) +
           0.5 * cfg_.alpha * cfg_.dt * setup_.gamma_norms.norm_sq(robin_gap);
    double src = 0.0;
    if (forcing_.p_in) src += forcing_.p_in(next.t) * forcing_.p_in(next.t) * setup_.len_in;
    if (forcing_.p_out)
      src += forcing_.p_out(next.t) * forcing_.p_out(next.t) * setup_.len_out;
    const double c2 = cfg_.c_ti_estimate * cfg_.c_ti_estimate;
    r.sources = prev.sources + cfg_.dt * c2 / (2.0 * mat_.mu_f) * src;
    log->rows.push_back(r);
  }
  return next;
}

LinearFsiState run_linear(const LinearFsiSolver& solver, LinearFsiState state,
                          int nsteps, EnergyLog* log) {
  for (int k = 0; k < nsteps; ++k) state = solver.step(state, log);
  return state;
}

}  // namespace robinfsi
