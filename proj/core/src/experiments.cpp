#include "robinfsi/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "robinfsi/errors.hpp"
#include "robinfsi/io.hpp"
#include "robinfsi/mms.hpp"
#include "robinfsi/monolithic.hpp"
#include "robinfsi/norms.hpp"
#include "robinfsi/study.hpp"

namespace robinfsi {

namespace {

using nlohmann::json;

/// Piecewise-linear y(x) along the deformed interface polyline.
struct InterfaceLine {
  std::vector<double> xs, ys;
  explicit InterfaceLine(const Mesh& deformed) {
    for (int id : interface_nodes(deformed)) {
      xs.push_back(deformed.nodes[id].x);
      ys.push_back(deformed.nodes[id].y);
    }
  }
  double y_at(double x) const {
    if (x <= xs.front()) return ys.front();
    for (size_t k = 0; k + 1 < xs.size(); ++k)
      if (x <= xs[k + 1]) {
        const double u = (x - xs[k]) / (xs[k + 1] - xs[k]);
        return (1.0 - u) * ys[k] + u * ys[k + 1];
      }
    return ys.back();
  }
};

}  // namespace

Profiles extract_profiles(const FEFunction& v, const FEFunction& p,
                          const FEFunction& eta, const FsiSetup& setup,
                          const Mesh& fluid_deformed, const MeshParams& mesh,
                          int stations) {
  Profiles out;
  const PointLocator locator(fluid_deformed);
  const InterfaceLine top(fluid_deformed);

  // reference interface line for the solid displacement trace
  std::vector<double> sx, sdy;
  {
    const Mesh& solid = *setup.solid_ref;
    for (int id : interface_nodes(solid)) {
      sx.push_back(solid.nodes[id].x);
      sdy.push_back(eta.coeffs[setup.vs->dof(id, 1)]);
    }
  }
  auto eta_y_at = [&](double x) {
    if (x <= sx.front()) return sdy.front();
    for (size_t k = 0; k + 1 < sx.size(); ++k)
      if (x <= sx[k + 1]) {
        const double u = (x - sx[k]) / (sx[k + 1] - sx[k]);
        return (1.0 - u) * sdy[k] + u * sdy[k + 1];
      }
    return sdy.back();
  };

  const int nseg = 2 * mesh.ny_fluid;
  const double ga = 0.5 - 0.5 / std::sqrt(3.0), gb = 0.5 + 0.5 / std::sqrt(3.0);
  for (int i = 0; i < stations; ++i) {
    const double x = (i + 0.5) * mesh.length / stations;
    const double ytop = top.y_at(x);
    double q = 0.0, pbar = 0.0;
    const double dy = ytop / nseg;
    for (int s = 0; s < nseg; ++s) {
      const double y0 = s * dy;
      for (double g : {ga, gb}) {
        const Vec2 pt{x, y0 + g * dy};
        double r, sref;
        const int tri = locator.locate(pt, &r, &sref);
        if (tri < 0) continue;
        const Vec2 vel = eval_vector(v, tri, r, sref);
        const double pv = eval_scalar(p, tri, r, sref);
        q += 0.5 * dy * vel.x;
        pbar += 0.5 * dy * pv;
      }
    }
    out.x.push_back(x);
    out.flowrate.push_back(q);
    out.mean_pressure.push_back(pbar / ytop);
    out.eta_y.push_back(eta_y_at(x));
  }
  return out;
}

EnergyLog energy_check_run(double alpha, double dt, double t_end, int nx,
                           int ny_fluid, int ny_solid) {
  ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, nx, ny_fluid, ny_solid);
  MaterialParams mat;  // unit parameters
  SchemeConfig cfg;
  cfg.alpha = alpha;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.bc = BcVariant::DynamicPressure;
  cfg.wall = WallBc::NoSlip;
  cfg.convection = true;
  cfg.check_gcl = true;

  MovingFsiSolver solver(ch.fluid, ch.solid, ch.interface, mat, cfg);

  // smooth initial bumps compatible with the constraint set
  const auto v0 = [](Vec2 q) {
    return Vec2{0.1 * q.y * q.y * std::sin(M_PI * q.x),
                0.1 * q.x * (1.0 - q.x) * q.y};
  };
  const auto p0 = [](Vec2) { return 0.0; };
  const auto xi0 = [](Vec2 q) {
    return Vec2{0.01 * q.x * (1.0 - q.x) * (q.y - 0.5),
                0.02 * q.x * (1.0 - q.x) * (1.5 - q.y)};
  };
  const auto eta0 = [](Vec2 q) {
    return Vec2{0.005 * q.x * (1.0 - q.x) * (q.y - 0.5),
                0.01 * q.x * (1.0 - q.x) * (1.5 - q.y)};
  };
  MovingFsiState st =
      solver.initial_state(v0, p0, xi0, eta0, nullptr, nullptr);

  EnergyLog log;
  const int nsteps = static_cast<int>(std::lround(t_end / dt));
  run_moving(solver, st, nsteps, &log);
  return log;
}

namespace {

void write_profiles(const std::string& dir, const std::string& stem,
                    const Profiles& pr) {
  CsvWriter csv(dir + "/" + stem + ".csv");
  csv.row({"x", "flowrate", "mean_pressure", "interface_displacement_y"});
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < pr.x.size(); ++i) {
    csv.row_values({pr.x[i], pr.flowrate[i], pr.mean_pressure[i], pr.eta_y[i]});
    rows.push_back({pr.x[i], pr.flowrate[i], pr.mean_pressure[i], pr.eta_y[i]});
  }
  write_gnuplot(dir + "/" + stem + ".dat",
                {"x", "flowrate", "mean_pressure", "interface_displacement_y"},
                rows);
}

std::string time_stem(const char* base, double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_t%.6f", base, t);
  return buf;
}

json energy_json(const EnergyLog& log, double slack) {
  json j;
  if (log.rows.empty()) return j;
  j["g0"] = log.rows.front().g;
  j["g_final"] = log.rows.back().g;
  j["d_final"] = log.rows.back().d;
  j["n2_final"] = log.rows.back().n2;
  j["sources_final"] = log.rows.back().sources;
  j["max_step_increase"] = log.max_step_increase();
  j["monotone"] = log.non_increasing(slack);
  double max_gcl = 0.0;
  for (const auto& r : log.rows) max_gcl = std::max(max_gcl, r.gcl_residual);
  j["max_gcl_residual"] = max_gcl;
  return j;
}

int run_mms_single(const RunConfig& c) {
  const bool moving = c.experiment == Experiment::MmsMoving;
  if (c.mesh.length != 1.0 || c.mesh.fluid_height != 0.5 ||
      c.mesh.solid_height != 0.5)
    fail(ErrorCode::ValidationError,
         "manufactured-solution runs use the unit-square channel pair");

  const MmsProblem pr = moving ? example2_problem(c.material.lambda_s)
                               : example1_problem(c.material.lambda_s);
  ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, c.mesh.nx,
                                             c.mesh.ny_fluid, c.mesh.ny_solid);
  SchemeConfig cfg = c.scheme;
  cfg.io_noslip = true;
  cfg.wall = WallBc::NoSlip;
  cfg.clamp_solid_external = true;
  cfg.bc = BcVariant::NeumannPressure;
  cfg.convection = moving;

  const int nsteps = static_cast<int>(std::lround(cfg.t_end / cfg.dt));
  const double t_final = nsteps * cfg.dt;

  const auto v0 = [&](Vec2 x) { return pr.v(x, 0.0); };
  const auto p0 = [&](Vec2 x) { return pr.p(x, 0.0); };
  const auto xi0 = [&](Vec2 x) { return pr.xi(x, 0.0); };
  const auto eta0 = [&](Vec2 x) { return pr.eta(x, 0.0); };
  const VectorField tr0 = [&](Vec2 x) { return pr.reference_traction(x, 0.0); };

  EnergyLog log;
  MmsErrors errors;
  const Mesh* final_fluid = &ch.fluid;
  Mesh deformed_store;
  FEFunction vf, pf, etaf;

  if (!moving) {
    LinearFsiSolver solver(ch.fluid, ch.solid, ch.interface, pr.mat, cfg,
                           pr.forcing());
    LinearFsiState st = solver.initial_state(v0, p0, xi0, eta0, &tr0);
    st = run_linear(solver, st, nsteps, &log);
    errors = mms_errors(pr, st.eta, st.xi, st.v, ch.fluid, t_final);
    vf = st.v;
    pf = st.p;
    etaf = st.eta;
  } else {
    MovingFsiSolver solver(ch.fluid, ch.solid, ch.interface, pr.mat, cfg,
                           pr.forcing());
    const VectorField fd0 = [&](Vec2 x) { return pr.f_d(x, 0.0); };
    MovingFsiState st = solver.initial_state(v0, p0, xi0, eta0, &tr0, &fd0);
    st = run_moving(solver, st, nsteps, &log);
    errors = mms_errors(pr, st.eta, st.xi, st.v, st.ale.mesh_curr, t_final);
    deformed_store = st.ale.mesh_curr;
    final_fluid = &deformed_store;
    vf = st.v;
    pf = st.p;
    etaf = st.eta;
  }

  write_energy_csv(c.output.dir + "/energy.csv", log);
  if (c.output.vtk) {
    write_vtk(c.output.dir + "/fluid_final.vtk", *final_fluid,
              {{"velocity", &vf}}, {{"pressure", &pf}});
    write_vtk(c.output.dir + "/solid_final.vtk", ch.solid,
              {{"displacement", &etaf}});
  }

  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["t_final"] = t_final;
  j["e_eta"] = errors.e_eta;
  j["e_xi"] = errors.e_xi;
  j["e_F"] = errors.e_f;
  j["energy"] = energy_json(log, c.scheme.energy_slack);
  std::ofstream(c.output.dir + "/summary.json") << j.dump(2) << "\n";
  std::cout << "e_eta = " << errors.e_eta << "  e_xi = " << errors.e_xi
            << "  e_F = " << errors.e_f << "\n";
  return 0;
}

int run_study(const RunConfig& c) {
  StudySpec spec;
  spec.moving = c.scheme.convection;  // example2 preset switches this on
  spec.lambda_s = c.material.lambda_s;
  spec.alphas = c.study.alphas;
  spec.levels = c.study.levels;
  spec.base_dt = c.study.base_dt;
  spec.base_nx = c.study.base_nx;
  spec.base_ny_fluid = c.study.base_ny_fluid;
  spec.base_ny_solid = c.study.base_ny_solid;
  spec.t_end = c.scheme.t_end;
  spec.elements = c.scheme.elements;
  spec.jobs = c.study.jobs;

  if (c.experiment == Experiment::CouplingErrors) {
    spec.compute_coupling = true;
    spec.elements = ElementChoice::TaylorHoodP2P1;
    if (spec.base_nx == 10 && spec.base_dt == 0.01) {
      // default refinement sequence of the coupling-error study
      spec.base_nx = 16;
      spec.base_ny_fluid = 8;
      spec.base_ny_solid = 8;
      spec.base_dt = 1e-2;
    }
  }

  const ConvergenceTable table = run_convergence_study(spec);

  CsvWriter csv(c.output.dir + "/convergence.csv");
  csv.row({"alpha", "level", "h", "dt", "e_eta", "e_xi", "e_F", "e_ke",
           "e_sigma", "ok"});
  for (const auto& cell : table.cells)
    csv.row({format_double(cell.alpha), std::to_string(cell.level),
             format_double(cell.h), format_double(cell.dt),
             format_double(cell.e_eta), format_double(cell.e_xi),
             format_double(cell.e_f), format_double(cell.e_ke),
             format_double(cell.e_sigma), cell.ok ? "1" : "0"});
  std::ofstream(c.output.dir + "/convergence.txt") << table.to_text();
  std::cout << table.to_text();

  json j;
  j["experiment"] = experiment_name(c.experiment);
  for (double a : spec.alphas) {
    json ja;
    ja["e_eta_rates"] = table.rates(a, &StudyCell::e_eta);
    ja["e_xi_rates"] = table.rates(a, &StudyCell::e_xi);
    ja["e_F_rates"] = table.rates(a, &StudyCell::e_f);
    if (spec.compute_coupling) {
      ja["e_ke"] = table.cell(a, spec.levels - 1).e_ke;
      ja["e_sigma"] = table.cell(a, spec.levels - 1).e_sigma;
    }
    j["alpha_" + format_double(a)] = ja;
  }
  std::ofstream(c.output.dir + "/summary.json") << j.dump(2) << "\n";
  return 0;
}

int run_benchmark(const RunConfig& c) {
  ChannelMeshes ch =
      generate_channel_meshes(c.mesh.length, c.mesh.fluid_height,
                              c.mesh.solid_height, c.mesh.nx, c.mesh.ny_fluid,
                              c.mesh.ny_solid);
  Forcing forcing;
  const PulseInflow pulse = c.pulse;
  forcing.p_in = [pulse](double t) { return pulse_pressure(t, pulse); };
  forcing.p_out = [](double) { return 0.0; };

  const bool monolithic = c.experiment == Experiment::MonolithicBenchmark;
  const int nsteps = static_cast<int>(std::lround(c.scheme.t_end / c.scheme.dt));
  std::vector<int> profile_steps;
  for (double t : c.output.profile_times)
    profile_steps.push_back(static_cast<int>(std::lround(t / c.scheme.dt)));

  EnergyLog log;
  json j;
  j["experiment"] = experiment_name(c.experiment);

  auto maybe_profiles = [&](int n, double t, const FEFunction& v,
                            const FEFunction& p, const FEFunction& eta,
                            const FsiSetup& setup, const Mesh& deformed) {
    for (size_t k = 0; k < profile_steps.size(); ++k) {
      if (profile_steps[k] != n) continue;
      const Profiles prof = extract_profiles(v, p, eta, setup, deformed, c.mesh,
                                             c.output.profile_stations);
      write_profiles(c.output.dir, time_stem("profiles", t), prof);
    }
  };

  if (!monolithic) {
    MovingFsiSolver solver(ch.fluid, ch.solid, ch.interface, c.material,
                           c.scheme, forcing);
    if (!solver.dt_condition_satisfied())
      std::cerr << "note: dt exceeds the sufficient bound "
                << cfl_dt_bound(c.material.rho_f, c.scheme.alpha,
                                c.scheme.c_ti_estimate,
                                velocity_degree(c.scheme.elements),
                                solver.mesh_h())
                << "\n";
    MovingFsiState st = solver.zero_state();
    for (int n = 1; n <= nsteps; ++n) {
      st = solver.step(st, &log);
      maybe_profiles(n, st.t, st.v, st.p, st.eta, solver.setup(),
                     st.ale.mesh_curr);
      if (c.output.vtk && c.output.vtk_every > 0 && n % c.output.vtk_every == 0)
        write_vtk(c.output.dir + "/" + time_stem("fluid", st.t) + ".vtk",
                  st.ale.mesh_curr, {{"velocity", &st.v}},
                  {{"pressure", &st.p}});
    }
    j["final_iface_max_disp"] = log.rows.back().iface_max_disp;
  } else {
    MonolithicSolver solver(ch.fluid, ch.solid, ch.interface, c.material,
                            c.scheme, forcing);
    MonolithicState st = solver.zero_state();
    for (int n = 1; n <= nsteps; ++n) {
      st = solver.step(st, &log);
      maybe_profiles(n, st.t, st.v, st.p, st.eta, solver.setup(),
                     st.ale.mesh_curr);
    }
    j["final_iface_max_disp"] = log.rows.back().iface_max_disp;
  }

  write_energy_csv(c.output.dir + "/energy.csv", log);
  j["energy"] = energy_json(log, c.scheme.energy_slack);
  std::ofstream(c.output.dir + "/summary.json") << j.dump(2) << "\n";
  return 0;
}

int run_energy_check(const RunConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  bool all_ok = true;
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    EnergyLog log = energy_check_run(c.scheme.alpha, dt, c.scheme.t_end,
                                     c.mesh.nx, c.mesh.ny_fluid, c.mesh.ny_solid);
    char key[32];
    std::snprintf(key, sizeof(key), "dt_%g", dt);
    j[key] = energy_json(log, c.scheme.energy_slack);
    all_ok = all_ok && log.non_increasing(c.scheme.energy_slack);
    char stem[64];
    std::snprintf(stem, sizeof(stem), "energy_dt%g", dt);
    write_energy_csv(c.output.dir + "/" + stem + ".csv", log);
  }
  j["monotone_all"] = all_ok;
  std::ofstream(c.output.dir + "/summary.json") << j.dump(2) << "\n";
  std::cout << (all_ok ? "energy check passed\n" : "energy check FAILED\n");
  return all_ok ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  ensure_directory(config.output.dir);

  int rc = 0;
  switch (config.experiment) {
    case Experiment::MmsFixed:
    case Experiment::MmsMoving:
      rc = run_mms_single(config);
      break;
    case Experiment::Convergence:
    case Experiment::CouplingErrors:
      rc = run_study(config);
      break;
    case Experiment::Benchmark:
    case Experiment::MonolithicBenchmark:
      rc = run_benchmark(config);
      break;
    case Experiment::EnergyCheck:
      rc = run_energy_check(config);
      break;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ofstream(config.output.dir + "/run_info.json")
      << json{{"experiment", experiment_name(config.experiment)},
              {"wall_time_s", wall},
              {"exit", rc}}
             .dump(2)
      << "\n";
  return rc;
}

}  // namespace robinfsi
