#include <doctest.h>

#include <cmath>
#include <random>

#include "robinfsi/ale.hpp"
#include "robinfsi/errors.hpp"
#include "robinfsi/mms.hpp"
#include "robinfsi/norms.hpp"
#include "test_support.hpp"

using namespace robinfsi;

TEST_CASE("harmonic extension basics") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 8, 4, 4);
  const AleSolver ale(ch.fluid);

  SUBCASE("zero data extends to zero") {
    std::vector<Vec2> zero(ale.interface_node_ids().size());
    const FEFunction ef = ale.extend(zero);
    for (double c : ef.coeffs) CHECK(c == 0.0);
  }

  SUBCASE("matches a dense Laplace oracle") {
    std::vector<Vec2> data(ale.interface_node_ids().size());
    for (size_t k = 0; k < data.size(); ++k) {
      const double x = ch.fluid.nodes[ale.interface_node_ids()[k]].x;
      data[k] = {0.0, 0.05 * std::sin(M_PI * x)};
    }
    const FEFunction ef = ale.extend(data);

    // dense oracle: P1 Laplacian from explicit barycentric gradient formulas
    const Mesh& m = ch.fluid;
    const int n = m.n_nodes();
    testsup::Dense k(n, n);
    for (int t = 0; t < m.n_tris(); ++t) {
      const Vec2 p0 = m.nodes[m.tris[t][0]], p1 = m.nodes[m.tris[t][1]],
                 p2 = m.nodes[m.tris[t][2]];
      const double area2 =
          (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
      const Vec2 g[3] = {{(p1.y - p2.y) / area2, (p2.x - p1.x) / area2},
                         {(p2.y - p0.y) / area2, (p0.x - p2.x) / area2},
                         {(p0.y - p1.y) / area2, (p1.x - p0.x) / area2}};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          k(m.tris[t][i], m.tris[t][j]) += 0.5 * area2 * dot(g[i], g[j]);
    }
    std::vector<double> gvals(n, 0.0);
    std::vector<char> fixed(n, 0);
    for (const auto& e : m.boundary) fixed[e.a] = fixed[e.b] = 1;
    for (size_t kk = 0; kk < data.size(); ++kk)
      gvals[ale.interface_node_ids()[kk]] = data[kk].y;
    std::vector<double> rhs(n, 0.0);
    for (int i = 0; i < n; ++i) {
      if (fixed[i]) continue;
      for (int j = 0; j < n; ++j)
        if (fixed[j]) rhs[i] -= k(i, j) * gvals[j];
    }
    for (int i = 0; i < n; ++i)
      if (fixed[i]) {
        for (int j = 0; j < n; ++j) {
          k(i, j) = (i == j) ? 1.0 : 0.0;
          if (!fixed[j]) k(j, i) = 0.0;
        }
        rhs[i] = gvals[i];
      }
    const auto x = testsup::dense_solve(k, rhs);
    const FESpace& vs = ale.space();
    for (int i = 0; i < n; ++i)
      CHECK(ef.coeffs[vs.dof(i, 1)] == doctest::Approx(x[i]).epsilon(1e-9));
  }

  SUBCASE("uniform vertical interface displacement decays to zero at in/out") {
    std::vector<Vec2> data(ale.interface_node_ids().size(), Vec2{0.0, 0.02});
    const FEFunction ef = ale.extend(data);
    const FESpace& vs = ale.space();
    for (int i = 0; i < ch.fluid.n_nodes(); ++i) {
      const Vec2 p = ch.fluid.nodes[i];
      if (p.x < 1e-12 || p.x > 1.0 - 1e-12)
        CHECK(ef.coeffs[vs.dof(i, 1)] == 0.0);
    }
    for (size_t k = 0; k < data.size(); ++k)
      CHECK(ef.coeffs[vs.dof(ale.interface_node_ids()[k], 1)] == 0.02);
  }
}

TEST_CASE("manufactured extension recovers the exact field at O(h^2)") {
  const MmsProblem pr = example2_problem(1.0);
  double prev = 1e9;
  for (int nx : {8, 16, 32}) {
    const ChannelMeshes ch =
        generate_channel_meshes(1.0, 0.5, 0.5, nx, nx / 2, nx / 2);
    const AleSolver ale(ch.fluid);
    const double t = 0.2;
    std::vector<Vec2> data(ale.interface_node_ids().size());
    for (size_t k = 0; k < data.size(); ++k)
      data[k] = pr.eta(ch.fluid.nodes[ale.interface_node_ids()[k]], t);
    const VectorField fd = [&](Vec2 x) { return pr.f_d(x, t); };
    const FEFunction ef = ale.extend(data, &fd);
    const double err =
        l2_error(ef, ch.fluid, [&](Vec2 x) { return pr.eta_f(x, t); });
    if (prev < 1e8) {
      const double rate = std::log2(prev / err);
      CHECK(rate > 1.7);
    }
    prev = err;
  }
}

TEST_CASE("domain velocity") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 4, 2, 2);
  const FESpace p1(ch.fluid, Family::P1, 2);

  SUBCASE("equal fields give zero") {
    FEFunction a(p1);
    for (auto& c : a.coeffs) c = 0.3;
    const FEFunction w = domain_velocity(a, a, 0.1);
    for (double c : w.coeffs) CHECK(c == 0.0);
  }

  SUBCASE("linear motion gives the constant rate") {
    FEFunction a(p1), b(p1);
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
      a.coeffs[i] = 0.1 * static_cast<double>(i % 7);
      b.coeffs[i] = a.coeffs[i] + 0.05 * 2.0;
    }
    const FEFunction w = domain_velocity(b, a, 0.05);
    for (double c : w.coeffs) CHECK(c == doctest::Approx(2.0).epsilon(1e-13));
  }

  SUBCASE("random pair matches the direct finite difference") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FEFunction a(p1), b(p1);
    for (auto& c : a.coeffs) c = u(rng);
    for (auto& c : b.coeffs) c = u(rng);
    const double dt = 0.025;
    const FEFunction w = domain_velocity(b, a, dt);
    for (size_t i = 0; i < w.coeffs.size(); ++i)
      CHECK(w.coeffs[i] ==
            doctest::Approx((b.coeffs[i] - a.coeffs[i]) / dt).epsilon(1e-13));
  }
}

TEST_CASE("interface velocity override") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 6, 3, 3);
  const FESpace p1(ch.fluid, Family::P1, 2);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  for (Family fam : {Family::P1Bubble, Family::P2}) {
    const FESpace vf(ch.fluid, fam, 2);
    FEFunction v(vf), w(p1);
    for (auto& c : v.coeffs) c = u(rng);
    for (auto& c : w.coeffs) c = u(rng);

    const FEFunction vo = interface_velocity_override(v, w);

    // overridden trace equals w along every interface edge
    static const Vec2 refc[3] = {{0, 0}, {1, 0}, {0, 1}};
    for (const auto& e : ch.fluid.boundary) {
      if (e.tag != BoundaryTag::Interface) continue;
      const Vec2 ra = refc[e.local], rb = refc[(e.local + 1) % 3];
      for (double t : {0.0, 0.31, 0.5, 0.77, 1.0}) {
        const double r = (1 - t) * ra.x + t * rb.x;
        const double s = (1 - t) * ra.y + t * rb.y;
        const Vec2 gap =
            eval_vector(vo, e.tri, r, s) - eval_vector(w, e.tri, r, s);
        CHECK(std::abs(gap.x) < 1e-13);
        CHECK(std::abs(gap.y) < 1e-13);
      }
    }

    // interior dofs are bit-identical
    for (int sd = 0; sd < vf.n_scalar_dofs(); ++sd) {
      bool on_iface = false;
      for (const auto& e : ch.fluid.boundary) {
        if (e.tag != BoundaryTag::Interface) continue;
        if (sd == e.a || sd == e.b) on_iface = true;
        if (fam == Family::P2 && sd == vf.edge_scalar_dof(e.a, e.b))
          on_iface = true;
      }
      if (!on_iface)
        for (int c = 0; c < 2; ++c)
          CHECK(vo.coeffs[vf.dof(sd, c)] == v.coeffs[vf.dof(sd, c)]);
    }
  }
}

TEST_CASE("geometric conservation identity") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 5, 3, 3);
  const FESpace p1(ch.fluid, Family::P1, 2);

  SUBCASE("static mesh") {
    const FESpace vf(ch.fluid, Family::P1Bubble, 2);
    FEFunction u(vf);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    for (auto& c : u.coeffs) c = ur(rng);
    const FEFunction w(p1);
    CHECK(gcl_check(u, ch.fluid, ch.fluid, ch.fluid, w, 0.1) < 1e-14);
  }

  SUBCASE("rigid translation") {
    const FESpace vf(ch.fluid, Family::P1Bubble, 2);
    FEFunction u(vf);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    for (auto& c : u.coeffs) c = ur(rng);
    const double dt = 0.2;
    FEFunction w(p1);
    for (int i = 0; i < ch.fluid.n_nodes(); ++i) {
      w.coeffs[p1.dof(i, 0)] = 0.05;
      w.coeffs[p1.dof(i, 1)] = -0.02;
    }
    std::vector<Vec2> shift(ch.fluid.n_nodes(), Vec2{0.05 * dt, -0.02 * dt});
    const Mesh m_new = deform_mesh(ch.fluid, shift);
    const Mesh m_half = midpoint_mesh(ch.fluid, m_new);
    CHECK(gcl_check(u, ch.fluid, m_half, m_new, w, dt) < 1e-13);
  }

  SUBCASE("random small deformations over 100 trials") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    const FESpace vf(ch.fluid, Family::P1Bubble, 2);
    const double dt = 0.05;
    for (int trial = 0; trial < 100; ++trial) {
      FEFunction u(vf);
      for (auto& c : u.coeffs) c = ur(rng);
      FEFunction w(p1);
      for (auto& c : w.coeffs) c = 0.2 * ur(rng);
      std::vector<Vec2> delta(ch.fluid.n_nodes());
      for (int i = 0; i < ch.fluid.n_nodes(); ++i)
        delta[i] = {dt * w.coeffs[p1.dof(i, 0)], dt * w.coeffs[p1.dof(i, 1)]};
      const Mesh m_new = deform_mesh(ch.fluid, delta);
      const Mesh m_half = midpoint_mesh(ch.fluid, m_new);
      CHECK(gcl_check(u, ch.fluid, m_half, m_new, w, dt) <= 1e-12);
    }
  }
}

TEST_CASE("geometry advance guards the element J range") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 4, 2, 2);
  const AleSolver ale(ch.fluid);
  AleState st = initial_geometry(ale, FEFunction(ale.space()));
  CHECK(st.min_j == doctest::Approx(1.0));

  // compress the top row heavily: the J guard must fire
  std::vector<Vec2> data(ale.interface_node_ids().size(), Vec2{0.0, -0.24});
  const FEFunction ef = ale.extend(data);
  CHECK_THROWS_AS(advance_geometry(ale, st, ef, 0.1, 0.9, 1.1), Error);
}
