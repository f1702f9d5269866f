#include "robinfsi/study.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <sstream>
#include <tuple>

#include "robinfsi/errors.hpp"
#include "robinfsi/norms.hpp"
#include "robinfsi/quadrature.hpp"

namespace robinfsi {

const StudyCell& ConvergenceTable::cell(double alpha, int level) const {
  for (const auto& c : cells)
    if (c.alpha == alpha && c.level == level) return c;
  fail(ErrorCode::ValidationError, "no such study cell");
}

std::vector<double> ConvergenceTable::rates(double alpha,
                                            double StudyCell::*field) const {
  std::vector<double> errs;
  for (int l = 0; l < spec.levels; ++l) errs.push_back(cell(alpha, l).*field);
  return rates_from(errs);
}

std::vector<double> rates_from(const std::vector<double>& errors) {
  std::vector<double> r;
  for (size_t k = 0; k + 1 < errors.size(); ++k)
    r.push_back(std::log2(errors[k] / errors[k + 1]));
  return r;
}

double fitted_rate(const std::vector<double>& errors) {
  // least-squares slope of -log2(e_k) vs k
  const int n = static_cast<int>(errors.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    const double y = -std::log2(errors[k]);
    sx += k;
    sy += y;
    sxx += static_cast<double>(k) * k;
    sxy += k * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string ConvergenceTable::to_text() const {
  std::ostringstream os;
  os.precision(4);
  os << std::scientific;
  for (double a : spec.alphas) {
    os << "alpha = " << a << "\n";
    os << "  level        h         dt        e_eta       e_xi        e_F";
    if (spec.compute_coupling) os << "        e_ke      e_sigma";
    os << "\n";
    for (int l = 0; l < spec.levels; ++l) {
      const StudyCell& c = cell(a, l);
      os << "  " << l << "  " << c.h << "  " << c.dt;
      if (c.ok) {
        os << "  " << c.e_eta << "  " << c.e_xi << "  " << c.e_f;
        if (spec.compute_coupling) os << "  " << c.e_ke << "  " << c.e_sigma;
      } else {
        os << "  failed: " << c.error;
      }
      os << "\n";
    }
    os << "  rates e_eta:";
    for (double r : rates(a, &StudyCell::e_eta)) os << " " << r;
    os << "   e_xi:";
    for (double r : rates(a, &StudyCell::e_xi)) os << " " << r;
    os << "   e_F:";
    for (double r : rates(a, &StudyCell::e_f)) os << " " << r;
    os << "\n";
  }
  return os.str();
}

MmsErrors mms_errors(const MmsProblem& pr, const FEFunction& eta,
                     const FEFunction& xi, const FEFunction& v,
                     const Mesh& fluid_final, double t_final) {
  const Mesh& solid = eta.space->mesh();
  const double t = t_final;
  const auto grad_eta_ex = [&](Vec2 x) { return pr.grad_eta(x, t); };
  const auto xi_ex = [&](Vec2 x) { return pr.xi(x, t); };
  const auto v_ex = [&](Vec2 x) { return pr.v(x, t); };

  MmsErrors e;
  const double num_eta =
      s_error(eta, pr.mat.mu_s, pr.mat.lambda_s, grad_eta_ex);
  const double den_eta =
      s_norm_closure(solid, pr.mat.mu_s, pr.mat.lambda_s, grad_eta_ex);
  e.e_eta = relative_error(num_eta * num_eta, den_eta * den_eta);
  e.e_xi = relative_error(l2_error(xi, solid, xi_ex),
                          l2_norm_closure(solid, xi_ex));
  e.e_f = relative_error(l2_error(v, fluid_final, v_ex),
                         l2_norm_closure(fluid_final, v_ex));
  return e;
}

MmsErrors mms_errors_closures(const MmsProblem& pr,
                              [[maybe_unused]] const SpaceTimeVec& num_eta,
                              const SpaceTimeMat& num_grad_eta,
                              const SpaceTimeVec& num_xi, const SpaceTimeVec& num_v,
                              const Mesh& solid_mesh, const Mesh& fluid_mesh,
                              double t) {
  const TriRule& rule = tri_rule(6);
  auto int_sq_vec = [&](const Mesh& m, auto&& f) {
    double acc = 0.0;
    for (int tr = 0; tr < m.n_tris(); ++tr) {
      const ElementGeometry eg = element_geometry(m, tr);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2 x = eg.map(rule.points[q].x, rule.points[q].y);
        const Vec2 val = f(x);
        acc += rule.weights[q] * eg.det * dot(val, val);
      }
    }
    return std::sqrt(std::max(0.0, acc));
  };
  auto s_of = [&](auto&& grad) {
    double acc = 0.0;
    for (int tr = 0; tr < solid_mesh.n_tris(); ++tr) {
      const ElementGeometry eg = element_geometry(solid_mesh, tr);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2 x = eg.map(rule.points[q].x, rule.points[q].y);
        const Mat2 g = grad(x);
        const Mat2 d = sym(g);
        const double div = g.trace();
        acc += rule.weights[q] * eg.det *
               (2.0 * pr.mat.mu_s * ddot(d, d) + pr.mat.lambda_s * div * div);
      }
    }
    return std::sqrt(std::max(0.0, acc));
  };

  MmsErrors e;
  const double num_s = s_of([&](Vec2 x) {
    return num_grad_eta(x, t) - pr.grad_eta(x, t);
  });
  const double den_s = s_of([&](Vec2 x) { return pr.grad_eta(x, t); });
  e.e_eta = relative_error(num_s * num_s, den_s * den_s);
  e.e_xi = relative_error(
      int_sq_vec(solid_mesh, [&](Vec2 x) { return num_xi(x, t) - pr.xi(x, t); }),
      int_sq_vec(solid_mesh, [&](Vec2 x) { return pr.xi(x, t); }));
  e.e_f = relative_error(
      int_sq_vec(fluid_mesh, [&](Vec2 x) { return num_v(x, t) - pr.v(x, t); }),
      int_sq_vec(fluid_mesh, [&](Vec2 x) { return pr.v(x, t); }));
  return e;
}

std::pair<double, double> coupling_errors(const FsiSetup& setup,
                                          const FEFunction& v,
                                          const FEFunction& p,
                                          const FEFunction& xi,
                                          const FEFunction& eta,
                                          const FEFunction* eta_f,
                                          const Mesh& fluid_deformed,
                                          const MaterialParams& mat) {
  // kinematic error: interface L2 of the paired trace difference v − ξ
  const int nv = setup.vf->n_dofs();
  std::vector<double> diff(nv, 0.0), von(nv, 0.0);
  for (size_t k = 0; k < setup.coupling.fluid_dofs.size(); ++k) {
    const int fd = setup.coupling.fluid_dofs[k];
    diff[fd] = v.coeffs[fd] - xi.coeffs[setup.coupling.solid_dofs[k]];
    von[fd] = v.coeffs[fd];
  }
  const auto& mg = setup.coupling.mg_fluid;
  const double e_ke_num = std::sqrt(std::max(0.0, dot(diff, mg * diff)));
  const double e_ke_den = std::sqrt(std::max(0.0, dot(von, mg * von)));

  // dynamic error: per-unit-reference-length tractions on Γ̂
  const Mesh& fluid_ref = *setup.fluid_ref;
  const Mesh& solid_ref = *setup.solid_ref;
  std::map<std::pair<int, int>, const BoundaryEdge*> solid_edges;
  for (const auto& e : solid_ref.boundary)
    if (e.tag == BoundaryTag::Interface)
      solid_edges[std::minmax(e.a, e.b)] = &e;
  std::map<int, int> f2s;
  for (size_t k = 0; k < setup.coupling.fluid_sdofs.size(); ++k)
    if (setup.coupling.fluid_sdofs[k] < fluid_ref.n_nodes())
      f2s[setup.coupling.fluid_sdofs[k]] = setup.coupling.solid_sdofs[k];

  const EdgeRule& rule = edge_rule(5);
  static const Vec2 refc[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  double num = 0.0, den = 0.0;
  for (const auto& fe : fluid_ref.boundary) {
    if (fe.tag != BoundaryTag::Interface) continue;
    const auto se_it = solid_edges.find(std::minmax(f2s.at(fe.a), f2s.at(fe.b)));
    if (se_it == solid_edges.end())
      fail(ErrorCode::ValidationError, "unpaired interface edge");
    const BoundaryEdge& se = *se_it->second;
    const Vec2 fa = refc[fe.local], fb = refc[(fe.local + 1) % 3];
    const Vec2 sa = refc[se.local], sb = refc[(se.local + 1) % 3];
    const double xa = fluid_ref.nodes[fe.a].x, xb = fluid_ref.nodes[fe.b].x;
    const double sxa = solid_ref.nodes[se.a].x, sxb = solid_ref.nodes[se.b].x;
    const double len = std::abs(xb - xa);
    const Vec2 n_ref{0.0, 1.0};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double u = rule.points[q];
      const double xq = (1.0 - u) * xa + u * xb;
      const double rf = (1.0 - u) * fa.x + u * fb.x;
      const double sf = (1.0 - u) * fa.y + u * fb.y;
      const double us = (xq - sxa) / (sxb - sxa);
      const double rs = (1.0 - us) * sa.x + us * sb.x;
      const double ss = (1.0 - us) * sa.y + us * sb.y;

      const Mat2 sig_f =
          fluid_stress(v, p, mat.mu_f, fluid_deformed, fe.tri, rf, sf);
      Vec2 t_f;
      if (eta_f) {
        const Mat2 f =
            Mat2::identity() + eval_vector_grad(*eta_f, fluid_ref, fe.tri, rf, sf);
        const Mat2 piola = f.det() * (sig_f * inverse(f).transpose());
        t_f = piola * n_ref;
      } else {
        t_f = sig_f * n_ref;
      }
      const Mat2 sig_s =
          solid_stress(eta, mat.mu_s, mat.lambda_s, se.tri, rs, ss);
      const Vec2 t_s = sig_s * n_ref;

      const Vec2 gap = t_f - t_s;
      num += rule.weights[q] * len * dot(gap, gap);
      den += rule.weights[q] * len * dot(t_f, t_f);
    }
  }
  const double e_sigma = std::sqrt(num / std::max(den, 1e-300));
  return {relative_error(e_ke_num, e_ke_den), e_sigma};
}

double alpha_heuristic(double rho_s, double h_s, double dt, double youngs,
                       double nu, double rho1, double rho2) {
  const double beta =
      youngs / (1.0 - nu * nu) * (4.0 * rho1 * rho1 - 2.0 * (1.0 - nu) * rho2 * rho2);
  return rho_s * h_s / dt + beta * h_s * dt;
}

namespace {

struct CellTask {
  double alpha;
  int level;
};

StudyCell run_cell(const StudySpec& spec, double alpha, int level) {
  StudyCell cell;
  cell.alpha = alpha;
  cell.level = level;
  cell.dt = spec.base_dt / (1 << level);
  const int nx = spec.base_nx << level;
  const int nyf = spec.base_ny_fluid << level;
  const int nys = spec.base_ny_solid << level;
  try {
    const MmsProblem pr = spec.moving ? example2_problem(spec.lambda_s)
                                      : example1_problem(spec.lambda_s);
    ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, nx, nyf, nys);
    cell.h = max_diameter(ch.fluid);

    SchemeConfig cfg;
    cfg.alpha = alpha;
    cfg.dt = cell.dt;
    cfg.t_end = spec.t_end;
    cfg.elements = spec.elements;
    cfg.bc = BcVariant::NeumannPressure;
    cfg.wall = WallBc::NoSlip;
    cfg.io_noslip = true;
    cfg.clamp_solid_external = true;
    cfg.convection = spec.moving;
    cfg.check_gcl = false;

    MaterialParams mat = pr.mat;
    const int nsteps = static_cast<int>(std::lround(spec.t_end / cell.dt));
    const double t_final = nsteps * cell.dt;

    const auto v0 = [&](Vec2 x) { return pr.v(x, 0.0); };
    const auto p0 = [&](Vec2 x) { return pr.p(x, 0.0); };
    const auto xi0 = [&](Vec2 x) { return pr.xi(x, 0.0); };
    const auto eta0 = [&](Vec2 x) { return pr.eta(x, 0.0); };
    const VectorField tr0 = [&](Vec2 x) { return pr.reference_traction(x, 0.0); };

    if (!spec.moving) {
      LinearFsiSolver solver(ch.fluid, ch.solid, ch.interface, mat, cfg,
                             pr.forcing());
      LinearFsiState st = solver.initial_state(v0, p0, xi0, eta0, &tr0);
      st = run_linear(solver, st, nsteps);
      const MmsErrors e =
          mms_errors(pr, st.eta, st.xi, st.v, ch.fluid, t_final);
      cell.e_eta = e.e_eta;
      cell.e_xi = e.e_xi;
      cell.e_f = e.e_f;
      if (spec.compute_coupling) {
        std::tie(cell.e_ke, cell.e_sigma) =
            coupling_errors(solver.setup(), st.v, st.p, st.xi, st.eta, nullptr,
                            ch.fluid, mat);
      }
    } else {
      MovingFsiSolver solver(ch.fluid, ch.solid, ch.interface, mat, cfg,
                             pr.forcing());
      const VectorField fd0 = [&](Vec2 x) { return pr.f_d(x, 0.0); };
      MovingFsiState st = solver.initial_state(v0, p0, xi0, eta0, &tr0, &fd0);
      st = run_moving(solver, st, nsteps);
      const MmsErrors e =
          mms_errors(pr, st.eta, st.xi, st.v, st.ale.mesh_curr, t_final);
      cell.e_eta = e.e_eta;
      cell.e_xi = e.e_xi;
      cell.e_f = e.e_f;
      if (spec.compute_coupling) {
        std::tie(cell.e_ke, cell.e_sigma) =
            coupling_errors(solver.setup(), st.v, st.p, st.xi, st.eta,
                            &st.ale.eta_f, st.ale.mesh_curr, mat);
      }
    }
    cell.ok = true;
  } catch (const std::exception& ex) {
    cell.ok = false;
    cell.error = ex.what();
  }
  return cell;
}

}  // namespace

ConvergenceTable run_convergence_study(const StudySpec& spec) {
  ConvergenceTable table;
  table.spec = spec;

  std::vector<CellTask> tasks;
  for (double a : spec.alphas)
    for (int l = 0; l < spec.levels; ++l) tasks.push_back({a, l});
  table.cells.resize(tasks.size());

  const int jobs = std::max(1, spec.jobs);
  std::atomic<size_t> next_task{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = next_task.fetch_add(1);
      if (i >= tasks.size()) break;
      table.cells[i] = run_cell(spec, tasks[i].alpha, tasks[i].level);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::future<void>> fs;
    for (int j = 0; j < jobs; ++j)
      fs.push_back(std::async(std::launch::async, worker));
    for (auto& f : fs) f.get();
  }
  return table;
}

TemporalOrderResult run_temporal_order_study(double alpha, int nx, int ny,
                                             double dt0, int n_dts,
                                             double t_end, double lambda_s) {
  const MmsProblem pr = example1_problem(lambda_s);
  ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, nx, ny, ny);

  auto run_at = [&](double dt) {
    SchemeConfig cfg;
    cfg.alpha = alpha;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.io_noslip = true;
    cfg.clamp_solid_external = true;
    cfg.convection = false;
    LinearFsiSolver solver(ch.fluid, ch.solid, ch.interface, pr.mat, cfg,
                           pr.forcing());
    const auto v0 = [&](Vec2 x) { return pr.v(x, 0.0); };
    const auto p0 = [&](Vec2 x) { return pr.p(x, 0.0); };
    const auto xi0 = [&](Vec2 x) { return pr.xi(x, 0.0); };
    const auto eta0 = [&](Vec2 x) { return pr.eta(x, 0.0); };
    const VectorField tr0 = [&](Vec2 x) { return pr.reference_traction(x, 0.0); };
    LinearFsiState st = solver.initial_state(v0, p0, xi0, eta0, &tr0);
    const int nsteps = static_cast<int>(std::lround(t_end / dt));
    return run_linear(solver, st, nsteps);
  };

  const LinearFsiState ref = run_at(dt0 / 8.0);

  // shared matrices for the energy-norm difference
  SchemeConfig cfg;
  cfg.io_noslip = true;
  cfg.clamp_solid_external = true;
  FsiSetup setup(ch.fluid, ch.solid, ch.interface, cfg);
  const SparseMatrix mf = assemble_mass(*setup.vf, pr.mat.rho_f, ch.fluid);
  const SparseMatrix ms = assemble_mass(*setup.vs, pr.mat.rho_s, ch.solid);
  const SparseMatrix ks =
      assemble_elasticity(*setup.vs, pr.mat.mu_s, pr.mat.lambda_s, 0.0);

  TemporalOrderResult out;
  for (int k = 0; k < n_dts; ++k) {
    const double dt = dt0 / (1 << k);
    const LinearFsiState st = run_at(dt);
    std::vector<double> dv = st.v.coeffs, dxi = st.xi.coeffs, deta = st.eta.coeffs;
    axpy(-1.0, ref.v.coeffs, dv);
    axpy(-1.0, ref.xi.coeffs, dxi);
    axpy(-1.0, ref.eta.coeffs, deta);
    const double err = std::sqrt(quadratic_energy(mf, dv) +
                                 quadratic_energy(ms, dxi) +
                                 quadratic_energy(ks, deta));
    out.dts.push_back(dt);
    out.errors.push_back(err);
  }
  out.rate = fitted_rate(out.errors);
  return out;
}

}  // namespace robinfsi
