#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "robinfsi/ale.hpp"
#include "robinfsi/assembly.hpp"
#include "robinfsi/interface.hpp"
#include "robinfsi/mesh.hpp"
#include "robinfsi/solve.hpp"

namespace robinfsi {

struct MaterialParams {
  double rho_f = 1.0;     // g/cm^3
  double mu_f = 1.0;      // poise
  double rho_s = 1.0;     // g/cm^3
  double mu_s = 1.0;      // dyne/cm^2
  double lambda_s = 1.0;  // dyne/cm^2
  double gamma = 0.0;     // dyne/cm^4 (spring term, benchmark only)
};

enum class BcVariant { NeumannPressure, DynamicPressure };
enum class ElementChoice { MiniP1, TaylorHoodP2P1 };
enum class WallBc { NoSlip, Symmetry, Neumann };

struct SchemeConfig {
  double alpha = 10.0;  // Robin combination parameter, dyne·s/cm^3
  double dt = 0.01;     // s
  double t_end = 0.3;   // s
  ElementChoice elements = ElementChoice::MiniP1;
  BcVariant bc = BcVariant::NeumannPressure;
  WallBc wall = WallBc::NoSlip;
  bool io_noslip = false;            // clamp v on inlet/outlet (MMS setting)
  bool clamp_solid_external = false; // clamp η on the external solid boundary
  bool convection = true;            // moving solver only
  bool freeze_geometry = false;      // moving solver: keep reference meshes
  double c_ti_estimate = 1.0;        // trace-inverse constant for the dt diagnostic
  double j_min = 0.5, j_max = 1.5;   // ALE element J guard
  bool check_gcl = true;
  double energy_slack = 1e-10;       // relative to G^0 in monotonicity checks
};

/// Prescribed data; any closure may be empty. Volume sources are Eulerian
/// for the fluid and referential for the solid; p_in/p_out are uniform.
struct Forcing {
  std::function<Vec2(Vec2, double)> f_f;
  std::function<Vec2(Vec2, double)> f_s;
  std::function<double(Vec2, double)> s;
  std::function<Vec2(Vec2, double)> f_d;
  std::function<double(double)> p_in;
  std::function<double(double)> p_out;
};

int velocity_degree(ElementChoice e);  // k in the dt condition: MINI 1, TH 2

/// Sufficient-time-step bound Δt ≤ ρ_F h / (α C_TI k²). A diagnostic, not a gate.
double cfl_dt_bound(double rho_f, double alpha, double c_ti, int k, double h);

// ---------------------------------------------------------------------------
// Energy diagnostics
// ---------------------------------------------------------------------------
struct EnergyRow {
  double t = 0.0;
  double e = 0.0;        // kinetic + elastic energy at this level
  double d = 0.0;        // cumulative viscous dissipation
  double n1 = 0.0;       // interface Robin terms at this level
  double n2 = 0.0;       // cumulative numerical dissipation
  double sources = 0.0;  // cumulative pressure-forcing budget
  double g = 0.0;        // e + n1
  double iface_max_disp = 0.0;
  double min_j = 1.0;
  double gcl_residual = 0.0;
};

struct EnergyLog {
  std::vector<EnergyRow> rows;
  /// G^{n+1} ≤ G^n + source increment + slack·G^0 at every step.
  bool non_increasing(double slack_rel) const;
  double max_step_increase() const;  // max over steps of G^{n+1}-G^n-src_inc
};

double quadratic_energy(const SparseMatrix& m, std::span<const double> x);

// ---------------------------------------------------------------------------
// Spaces, constraints and coupling for one solver configuration
// ---------------------------------------------------------------------------
struct FsiSetup {
  const Mesh* fluid_ref = nullptr;
  const Mesh* solid_ref = nullptr;
  std::unique_ptr<FESpace> vf, qf, vs;
  InterfaceCoupling coupling;
  DirichletSet fluid_bc{0};
  DirichletSet solid_bc{0};
  InterfaceNorms gamma_norms;        // over the active interface set
  std::vector<int> active_iface;     // fluid dofs, unconstrained
  double len_in = 0.0, len_out = 0.0;

  FsiSetup(const Mesh& fluid, const Mesh& solid, const InterfaceMap& imap,
           const SchemeConfig& cfg);
};

// ---------------------------------------------------------------------------
// Structure sub-problem (shared by the fixed and moving schemes; the solid
// always lives on its reference mesh, so the operator is constant in time).
// ---------------------------------------------------------------------------
class StructureOperator {
public:
  StructureOperator(const FsiSetup& setup, const MaterialParams& mat,
                    const SchemeConfig& cfg);

  /// One Robin sub-step: returns ξ^{n+1}; η update is the caller's
  /// η^{n+1} = η^n + Δt ξ^{n+1}.
  FEFunction substep(const FEFunction& xi_old, const FEFunction& eta_old,
                     const FEFunction& v_old, const TractionTrace& traction,
                     double t_new) const;

  const SparseMatrix& mass() const { return ms_; }
  const SparseMatrix& stiffness() const { return ks_; }

  const Forcing* forcing = nullptr;

private:
  const FsiSetup* setup_;
  MaterialParams mat_;
  SchemeConfig cfg_;
  SparseMatrix ms_, ks_;
  SparseMatrix lhs_elim_;
  std::unique_ptr<Factorization> fac_;
};

// ---------------------------------------------------------------------------
// Fluid sub-problem on a mesh-snapshot triple
// ---------------------------------------------------------------------------
struct FluidSnapshots {
  const Mesh* mesh_old = nullptr;   // mass term
  const Mesh* mesh_half = nullptr;  // convection
  const Mesh* mesh_new = nullptr;   // viscous, pressure, loads
};

class FluidOperator {
public:
  /// advecting: interface-overridden v^n (null disables convection);
  /// w: domain velocity (null on fixed domains).
  FluidOperator(const FsiSetup& setup, const MaterialParams& mat,
                const SchemeConfig& cfg, const FluidSnapshots& meshes,
                const FEFunction* advecting, const FEFunction* w,
                const Forcing* forcing, double t_new);

  /// Solves for (v^{n+1}, p^{n+1}).
  std::pair<FEFunction, FEFunction> solve(const FEFunction& v_old,
                                          const FEFunction& xi_new,
                                          const TractionTrace& traction) const;

  /// Consistent-flux recovery of the new interface traction functional from
  /// the discrete momentum residual (supported on the active interface set).
  TractionTrace recover_traction(const FEFunction& v_old,
                                 const FEFunction& v_new,
                                 const FEFunction& p_new, int level) const;

  const SparseMatrix& mass_old() const { return mass_old_; }
  const SparseMatrix& viscous() const { return visc_; }
  const SparseMatrix& saddle() const { return k_orig_; }
  std::span<const double> external_loads() const { return loads_v_; }

private:
  const FsiSetup* setup_;
  MaterialParams mat_;
  SchemeConfig cfg_;
  double t_new_;
  SparseMatrix mass_old_, visc_, div_, conv_, b_dp_;
  SparseMatrix k_orig_, k_elim_;
  std::vector<double> loads_v_;  // Neumann + volume forcing (velocity rows)
  std::vector<double> loads_p_;  // mass source (pressure rows)
  std::unique_ptr<Factorization> fac_;
};

/// Assembles ∫_Γ̂ t(x)·φ for a prescribed traction closure (initial data).
TractionTrace traction_from_closure(const FsiSetup& setup,
                                    const VectorField& traction, int level);

}  // namespace robinfsi
