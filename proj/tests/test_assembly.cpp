#include <doctest.h>

#include <cmath>
#include <random>

#include "robinfsi/assembly.hpp"
#include "robinfsi/errors.hpp"
#include "robinfsi/norms.hpp"
#include "robinfsi/solve.hpp"
#include "test_support.hpp"

using namespace robinfsi;

namespace {

Mesh unit_right_triangle() {
  Mesh m;
  m.nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.tris = {{0, 1, 2}};
  m.boundary = {{0, 1, BoundaryTag::FluidWall, 0, 0},
                {1, 2, BoundaryTag::Outlet, 0, 1},
                {2, 0, BoundaryTag::Inlet, 0, 2}};
  return m;
}

Mesh unit_square_two_tris() {
  Mesh m;
  m.nodes = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  m.tris = {{0, 1, 2}, {0, 2, 3}};
  m.boundary = {{0, 1, BoundaryTag::FluidWall, 0, 0},
                {1, 2, BoundaryTag::Outlet, 0, 1},
                {2, 3, BoundaryTag::Interface, 1, 1},
                {3, 0, BoundaryTag::Inlet, 1, 2}};
  return m;
}

}  // namespace

TEST_CASE("P1 mass on the unit right triangle is (1/24)[[2,1,1],[1,2,1],[1,1,2]]") {
  const Mesh m = unit_right_triangle();
  const FESpace v(m, Family::P1, 1);
  const SparseMatrix mm = assemble_mass(v, 1.0, m);
  const double e = 1.0 / 24.0;
  const double expect[3][3] = {{2 * e, e, e}, {e, 2 * e, e}, {e, e, 2 * e}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(mm.coeff(i, j) == doctest::Approx(expect[i][j]).epsilon(1e-14));
}

TEST_CASE("mass scales linearly in density and sums to density*area*components") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 4, 2, 2);
  for (Family fam : {Family::P1, Family::P1Bubble, Family::P2}) {
    const FESpace v(ch.fluid, fam, 2);
    const SparseMatrix m1 = assemble_mass(v, 1.0, ch.fluid);
    const SparseMatrix m2 = assemble_mass(v, 2.0, ch.fluid);
    double total = 0.0;
    for (double x : m1.values()) total += x;
    // partition of unity over the vertex basis plus enrichment integrals
    if (fam != Family::P1Bubble) {
      CHECK(total == doctest::Approx(0.5 * 2).epsilon(1e-12));
    }
    for (int k = 0; k < m1.nnz(); ++k)
      CHECK(m2.values()[k] == doctest::Approx(2.0 * m1.values()[k]).epsilon(1e-14));
    CHECK(m1.symmetry_gap() < 1e-14);
  }
}

TEST_CASE("elasticity energy identities") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 1.0, 0.5, 4, 4, 2);
  const FESpace v(ch.fluid, Family::P1, 2);  // unit square

  SUBCASE("rigid translation has zero strain energy") {
    const SparseMatrix k = assemble_elasticity(v, 1.0, 1.0, 0.0);
    const FEFunction u = interpolate(v, ch.fluid, [](Vec2) {
      return Vec2{0.37, 0.37};
    });
    const auto ku = k * u.coeffs;
    CHECK(std::abs(dot(u.coeffs, ku)) < 1e-13);
  }

  SUBCASE("uniaxial stretch on the unit square") {
    const SparseMatrix k = assemble_elasticity(v, 1.0, 1.0, 0.0);
    const FEFunction u = interpolate(v, ch.fluid, [](Vec2 p) {
      return Vec2{p.x, 0.0};
    });
    const auto ku = k * u.coeffs;
    CHECK(dot(u.coeffs, ku) == doctest::Approx(3.0).epsilon(1e-13));
  }

  SUBCASE("gamma-only reduces to the spring mass term") {
    const SparseMatrix k = assemble_elasticity(v, 1e-30, 0.0, 5.0);
    const SparseMatrix m = assemble_mass(v, 5.0, ch.fluid);
    for (int i = 0; i < k.rows(); ++i)
      for (int k2 = k.row_offsets()[i]; k2 < k.row_offsets()[i + 1]; ++k2)
        CHECK(k.values()[k2] ==
              doctest::Approx(m.coeff(i, k.col_indices()[k2]))
                  .epsilon(1e-12)
                  .scale(1.0));
  }
}

TEST_CASE("viscous form identities") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 1.0, 0.5, 4, 4, 2);
  const FESpace v(ch.fluid, Family::P1, 2);

  SUBCASE("rigid rotation has zero viscous energy") {
    const SparseMatrix a = assemble_fluid_viscous(v, 0.035, ch.fluid);
    const FEFunction u = interpolate(v, ch.fluid, [](Vec2 p) {
      return Vec2{-p.y, p.x};
    });
    CHECK(std::abs(dot(u.coeffs, a * u.coeffs)) < 1e-14);
  }

  SUBCASE("shear energy 2 mu int |D|^2") {
    const SparseMatrix a = assemble_fluid_viscous(v, 0.035, ch.fluid);
    const FEFunction u = interpolate(v, ch.fluid, [](Vec2 p) {
      return Vec2{p.y, 0.0};
    });
    CHECK(dot(u.coeffs, a * u.coeffs) == doctest::Approx(0.035).epsilon(1e-13));
  }

  SUBCASE("linear in viscosity") {
    const SparseMatrix a1 = assemble_fluid_viscous(v, 1.0, ch.fluid);
    const SparseMatrix a3 = assemble_fluid_viscous(v, 3.0, ch.fluid);
    for (int k = 0; k < a1.nnz(); ++k)
      CHECK(a3.values()[k] == doctest::Approx(3.0 * a1.values()[k]).epsilon(1e-14));
  }
}

TEST_CASE("divergence form identities") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 6, 3, 3);
  for (Family fam : {Family::P1Bubble, Family::P2}) {
    const FESpace v(ch.fluid, fam, 2);
    const FESpace q(ch.fluid, Family::P1, 1);
    const SparseMatrix b = assemble_divergence(v, q, ch.fluid);

    // psi = 1 against v = (x, 0): ∫ div v = area
    const FEFunction u = interpolate(v, ch.fluid, [](Vec2 p) {
      return Vec2{p.x, 0.0};
    });
    const auto bu = b * u.coeffs;
    double total = 0.0;
    for (double x : bu) total += x;
    CHECK(total == doctest::Approx(0.5).epsilon(1e-12));

    // divergence-free rotation maps to zero
    const FEFunction rot = interpolate(v, ch.fluid, [](Vec2 p) {
      return Vec2{-p.y, p.x};
    });
    for (double x : b * rot.coeffs) CHECK(std::abs(x) < 1e-13);

    // constant field maps to zero
    const FEFunction c = interpolate(v, ch.fluid, [](Vec2) {
      return Vec2{1.3, -0.4};
    });
    for (double x : b * c.coeffs) CHECK(std::abs(x) < 1e-13);
  }
}

TEST_CASE("assembly matches the dense Duffy oracle on small instances") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 3, 2, 2);

  for (Family fam : {Family::P1, Family::P1Bubble, Family::P2}) {
    const FESpace v(ch.fluid, fam, 2);

    const testsup::Dense m_o = testsup::dense_mass(v, 1.7, ch.fluid);
    const testsup::Dense m_l = testsup::to_dense(assemble_mass(v, 1.7, ch.fluid));
    CHECK(testsup::max_abs_diff(m_o, m_l) < 1e-10);

    const testsup::Dense k_o = testsup::dense_strain(v, ch.fluid, 1.3, 0.7, 2.1);
    const testsup::Dense k_l =
        testsup::to_dense(assemble_elasticity(v, 1.3, 0.7, 2.1));
    CHECK(testsup::max_abs_diff(k_o, k_l) < 1e-8);

    const FESpace q(ch.fluid, Family::P1, 1);
    const testsup::Dense b_o = testsup::dense_divergence(v, q, ch.fluid);
    const testsup::Dense b_l =
        testsup::to_dense(assemble_divergence(v, q, ch.fluid));
    CHECK(testsup::max_abs_diff(b_o, b_l) < 1e-9);
  }
}

TEST_CASE("ALE convection assembly") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 3, 2, 2);
  const FESpace v(ch.fluid, Family::P1Bubble, 2);
  const FESpace p1(ch.fluid, Family::P1, 2);

  SUBCASE("zero advecting field gives the zero matrix") {
    const FEFunction a(v);
    const SparseMatrix c = assemble_ale_convection(v, ch.fluid, 1.0, a);
    for (double x : c.values()) CHECK(x == 0.0);
  }

  SUBCASE("matches the dense quadrature oracle with and without mesh velocity") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    FEFunction a(v);
    for (auto& c : a.coeffs) c = u(rng);
    FEFunction w(p1);
    for (auto& c : w.coeffs) c = u(rng);
    const ScalarField src = [](Vec2 x) { return 0.3 * x.x - 0.1 * x.y; };

    const SparseMatrix c1 = assemble_ale_convection(v, ch.fluid, 1.2, a);
    CHECK(testsup::max_abs_diff(testsup::dense_convection(v, ch.fluid, 1.2, a,
                                                          nullptr, nullptr),
                                testsup::to_dense(c1)) < 1e-7);

    const SparseMatrix c2 = assemble_ale_convection(v, ch.fluid, 1.2, a, &w, &src);
    CHECK(testsup::max_abs_diff(
              testsup::dense_convection(v, ch.fluid, 1.2, a, &w, &src),
              testsup::to_dense(c2)) < 1e-7);
  }

  SUBCASE("constant advecting field against a linear target") {
    // a = (1,0), target v = (x,0): the weak action equals rho ∫ φ_x since
    // the divergence correction vanishes for the constant advecting field
    const FEFunction a = interpolate(v, ch.fluid, [](Vec2) {
      return Vec2{1.0, 0.0};
    });
    const FEFunction t = interpolate(v, ch.fluid, [](Vec2 p) {
      return Vec2{p.x, 0.0};
    });
    const SparseMatrix c = assemble_ale_convection(v, ch.fluid, 2.0, a);
    const auto ct = c * t.coeffs;
    const auto ones = assemble_vector_load(v, ch.fluid, [](Vec2) {
      return Vec2{2.0, 0.0};
    });
    for (int i = 0; i < v.n_dofs(); ++i)
      CHECK(ct[i] == doctest::Approx(ones[i]).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("interface boundary mass") {
  SUBCASE("single edge of length L gives (L/6)[[2,1],[1,2]] per component") {
    const Mesh m = unit_square_two_tris();
    const FESpace v(m, Family::P1, 2);
    const SparseMatrix mg = assemble_boundary_mass(v, BoundaryTag::Interface, m);
    for (int c = 0; c < 2; ++c) {
      CHECK(mg.coeff(v.dof(2, c), v.dof(2, c)) ==
            doctest::Approx(1.0 / 3).epsilon(1e-13));
      CHECK(mg.coeff(v.dof(3, c), v.dof(3, c)) ==
            doctest::Approx(1.0 / 3).epsilon(1e-13));
      CHECK(mg.coeff(v.dof(2, c), v.dof(3, c)) ==
            doctest::Approx(1.0 / 6).epsilon(1e-13));
    }
  }

  SUBCASE("entries total the interface length times components") {
    const ChannelMeshes ch = generate_channel_meshes(2.0, 0.5, 0.5, 5, 2, 2);
    for (Family fam : {Family::P1Bubble, Family::P2}) {
      const FESpace v(ch.fluid, fam, 2);
      const SparseMatrix mg =
          assemble_boundary_mass(v, BoundaryTag::Interface, ch.fluid);
      double total = 0.0;
      for (double x : mg.values()) total += x;
      CHECK(total == doctest::Approx(2.0 * 2).epsilon(1e-12));
      // non-interface dofs carry empty rows
      const auto ro = mg.row_offsets();
      const int wall_dof = v.dof(0, 0);  // corner (0,0) is not on Γ
      double rowsum = 0.0;
      for (int k = ro[wall_dof]; k < ro[wall_dof + 1]; ++k)
        rowsum += std::abs(mg.values()[k]);
      CHECK(rowsum == 0.0);
    }
  }
}

TEST_CASE("Neumann loads") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 4, 2, 2);
  const FESpace v(ch.fluid, Family::P1Bubble, 2);

  SUBCASE("zero pressure gives the zero vector") {
    const auto l = assemble_neumann_load(
        v, BoundaryTag::Inlet, [](Vec2) { return 0.0; }, ch.fluid);
    for (double x : l) CHECK(x == 0.0);
  }

  SUBCASE("unit pressure on the inlet pulls in +x with total 0.5") {
    const auto l = assemble_neumann_load(
        v, BoundaryTag::Inlet, [](Vec2) { return 1.0; }, ch.fluid);
    double fx = 0.0, fy = 0.0;
    for (int s = 0; s < v.n_scalar_dofs(); ++s) {
      fx += l[v.dof(s, 0)];
      fy += l[v.dof(s, 1)];
    }
    CHECK(fx == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(fy) < 1e-14);
    for (int s = 0; s < v.n_scalar_dofs(); ++s)
      if (s >= ch.fluid.n_nodes() || ch.fluid.nodes[s].x > 1e-12)
        CHECK(l[v.dof(s, 0)] == 0.0);
  }
}

TEST_CASE("Dirichlet elimination keeps the constrained solution") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 3, 2, 2);
  const FESpace v(ch.fluid, Family::P1, 1);
  SparseMatrix k;
  {
    TripletList t;
    t.add_block(assemble_mass(v, 1.0, ch.fluid), 0, 0, 1.0);
    for (int i = 0; i < v.n_dofs(); ++i) t.add(i, i, 1.0);
    k = std::move(t).compress(v.n_dofs(), v.n_dofs());
  }
  DirichletSet bc(v.n_dofs());
  add_boundary_dirichlet(bc, v, {BoundaryTag::Inlet}, {0}, 2.5);
  std::vector<double> b(v.n_dofs(), 1.0);
  const SparseMatrix k0 = k;
  apply_dirichlet(k, b, bc);
  const auto x = solve(k, b);
  for (int i = 0; i < v.n_dofs(); ++i)
    if (bc.constrained(i)) CHECK(x[i] == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(k.symmetry_gap() < 1e-14);
  const auto kx = k0 * x;
  for (int i = 0; i < v.n_dofs(); ++i)
    if (!bc.constrained(i)) CHECK(kx[i] == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("pointwise stress") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 4, 2, 2);

  SUBCASE("linear displacement with unit Lame constants") {
    const FESpace vs(ch.solid, Family::P2, 2);
    const FEFunction eta = interpolate(vs, ch.solid, [](Vec2 p) {
      return Vec2{p.x, 0.0};
    });
    PointwiseStressArgs args;
    args.eta = &eta;
    args.mu_s = 1.0;
    args.lambda_s = 1.0;
    // σ = 2 μ D + λ tr(D) I = diag(3, 1); reported against the fluid normal
    const Vec2 tr = pointwise_stress(args, Vec2{0.5, 0.5}, InterfaceSide::Solid);
    CHECK(tr.x == doctest::Approx(0.0));
    CHECK(tr.y == doctest::Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("hydrostatic fluid state") {
    const FESpace vf(ch.fluid, Family::P2, 2);
    const FESpace qf(ch.fluid, Family::P1, 1);
    const FEFunction v(vf);
    const FEFunction p = interpolate(qf, ch.fluid, [](Vec2) { return 3.0; });
    PointwiseStressArgs args;
    args.v = &v;
    args.p = &p;
    args.mu_f = 0.035;
    args.fluid_geom = &ch.fluid;
    const Vec2 tr = pointwise_stress(args, Vec2{0.25, 0.5}, InterfaceSide::Fluid);
    CHECK(tr.x == doctest::Approx(0.0));
    CHECK(tr.y == doctest::Approx(-3.0).epsilon(1e-13));
  }

  SUBCASE("rigid motion has zero stress") {
    const FESpace vs(ch.solid, Family::P2, 2);
    const FEFunction eta = interpolate(vs, ch.solid, [](Vec2 p) {
      return Vec2{0.1 - 0.3 * p.y, 0.2 + 0.3 * p.x};
    });
    PointwiseStressArgs args;
    args.eta = &eta;
    args.mu_s = 2.0;
    args.lambda_s = 1.5;
    const Vec2 tr = pointwise_stress(args, Vec2{0.75, 0.5}, InterfaceSide::Solid);
    CHECK(std::abs(tr.x) < 1e-12);
    CHECK(std::abs(tr.y) < 1e-12);
  }

  SUBCASE("off-interface point is rejected") {
    const FESpace vs(ch.solid, Family::P2, 2);
    const FEFunction eta(vs);
    PointwiseStressArgs args;
    args.eta = &eta;
    CHECK_THROWS_AS(pointwise_stress(args, Vec2{0.5, 0.9}, InterfaceSide::Solid),
                    Error);
  }
}

TEST_CASE("norms") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 1.0, 0.5, 8, 8, 4);

  SUBCASE("constant field on area A has l2 = c sqrt(A)") {
    const FESpace v(ch.fluid, Family::P1, 1);
    const FEFunction f = interpolate(v, ch.fluid, [](Vec2) { return 3.0; });
    CHECK(l2_norm(f, ch.fluid) == doctest::Approx(3.0).epsilon(1e-13));
  }

  SUBCASE("s_norm of a rigid translation vanishes") {
    const FESpace v(ch.solid, Family::P1, 2);
    const FEFunction f = interpolate(v, ch.solid, [](Vec2) {
      return Vec2{0.4, -0.1};
    });
    CHECK(s_norm(f, 1.0, 1.0) < 1e-13);
  }

  SUBCASE("interpolated sin(pi x) converges to sqrt(1/2)") {
    double prev_gap = 1e9;
    for (int nx : {16, 32, 64}) {
      const ChannelMeshes c2 = generate_channel_meshes(1.0, 1.0, 0.5, nx, nx, 2);
      const FESpace v(c2.fluid, Family::P1, 1);
      const FEFunction f = interpolate(v, c2.fluid, [](Vec2 p) {
        return std::sin(M_PI * p.x);
      });
      const double gap = std::abs(l2_norm(f, c2.fluid) - std::sqrt(0.5));
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap < 2e-4);
  }

  SUBCASE("relative error rejects a zero reference") {
    CHECK_THROWS_AS(relative_error(1.0, 0.0), Error);
  }
}

TEST_CASE("clamped elasticity is positive definite (dense pivot oracle)") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 6, 3, 3);
  const FESpace vs(ch.solid, Family::P1, 2);
  SparseMatrix k = assemble_elasticity(vs, 1.0, 1.0, 0.0);
  CHECK(k.symmetry_gap() < 1e-12);
  DirichletSet bc(vs.n_dofs());
  add_boundary_dirichlet(bc, vs, {BoundaryTag::SolidClamped}, {0, 1});
  std::vector<double> b(vs.n_dofs(), 0.0);
  apply_dirichlet(k, b, bc);
  // unpivoted Cholesky-style elimination: all pivots positive <=> SPD
  testsup::Dense d = testsup::to_dense(k);
  const int n = d.n;
  for (int c = 0; c < n; ++c) {
    CHECK(d(c, c) > 0.0);
    for (int i = c + 1; i < n; ++i) {
      const double f = d(i, c) / d(c, c);
      for (int j = c; j < n; ++j) d(i, j) -= f * d(c, j);
    }
  }
}
