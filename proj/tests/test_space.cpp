#include <doctest.h>

#include <cmath>
#include <random>

#include "robinfsi/fe_space.hpp"
#include "robinfsi/mesh.hpp"

using namespace robinfsi;

TEST_CASE("dof counts per family") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 4, 2, 2);
  const Mesh& m = ch.fluid;
  const int nn = m.n_nodes(), nt = m.n_tris();

  CHECK(FESpace(m, Family::P1, 1).n_scalar_dofs() == nn);
  CHECK(FESpace(m, Family::P1Bubble, 2).n_dofs() == 2 * (nn + nt));

  // Euler's formula for a planar triangulation: E = V + T - 1
  const FESpace p2(m, Family::P2, 1);
  CHECK(p2.n_scalar_dofs() == nn + (nn + nt - 1));
}

TEST_CASE("basis partitions unity and gradients sum to zero") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 2, 1, 1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Family fam : {Family::P1, Family::P1Bubble, Family::P2}) {
    const FESpace v(ch.fluid, fam, 1);
    for (int k = 0; k < 50; ++k) {
      double r = u(rng), s = u(rng);
      if (r + s > 1.0) {
        r = 1.0 - r;
        s = 1.0 - s;
      }
      double n[6];
      Vec2 g[6];
      v.basis_values(r, s, {n, static_cast<size_t>(v.n_local())});
      v.basis_ref_grads(r, s, {g, static_cast<size_t>(v.n_local())});
      double sum = 0.0;
      Vec2 gsum;
      // bubble is excluded from the vertex partition of unity
      const int nv = fam == Family::P1Bubble ? 3 : v.n_local();
      for (int l = 0; l < nv; ++l) {
        sum += n[l];
        gsum += g[l];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(gsum.x) < 1e-12);
      CHECK(std::abs(gsum.y) < 1e-12);
    }
  }
}

TEST_CASE("basis gradients match finite differences") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 2, 1, 1);
  const double h = 1e-7;
  for (Family fam : {Family::P1, Family::P1Bubble, Family::P2}) {
    const FESpace v(ch.fluid, fam, 1);
    const int nl = v.n_local();
    double np[6], nm[6];
    Vec2 g[6];
    for (double r : {0.2, 0.5}) {
      for (double s : {0.1, 0.3}) {
        v.basis_ref_grads(r, s, {g, static_cast<size_t>(nl)});
        v.basis_values(r + h, s, {np, static_cast<size_t>(nl)});
        v.basis_values(r - h, s, {nm, static_cast<size_t>(nl)});
        for (int l = 0; l < nl; ++l)
          CHECK(g[l].x == doctest::Approx((np[l] - nm[l]) / (2 * h)).epsilon(1e-5));
        v.basis_values(r, s + h, {np, static_cast<size_t>(nl)});
        v.basis_values(r, s - h, {nm, static_cast<size_t>(nl)});
        for (int l = 0; l < nl; ++l)
          CHECK(g[l].y == doctest::Approx((np[l] - nm[l]) / (2 * h)).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("interpolation reproduces nodal values and low-order polynomials") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 5, 3, 3);
  const Mesh& m = ch.fluid;
  const PointLocator loc(m);

  SUBCASE("nodal exactness") {
    const FESpace v(m, Family::P1, 1);
    const auto f = [](Vec2 p) { return std::sin(p.x) + p.y; };
    const FEFunction fh = interpolate(v, m, f);
    for (int i = 0; i < m.n_nodes(); ++i)
      CHECK(fh.coeffs[i] == f(m.nodes[i]));
  }

  SUBCASE("P1 affine reproduction") {
    for (Family fam : {Family::P1, Family::P1Bubble}) {
      const FESpace v(m, fam, 1);
      const auto f = [](Vec2 p) { return 2.0 * p.x - 3.0 * p.y + 0.25; };
      const FEFunction fh = interpolate(v, m, f);
      std::mt19937_64 rng(5);
      std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.0, 0.5);
      for (int k = 0; k < 50; ++k) {
        const Vec2 p{ux(rng), uy(rng)};
        CHECK(evaluate_scalar(fh, loc, p) == doctest::Approx(f(p)).epsilon(1e-13));
      }
    }
  }

  SUBCASE("P2 quadratic reproduction") {
    const FESpace v(m, Family::P2, 1);
    const auto f = [](Vec2 p) {
      return 1.0 + p.x - 2.0 * p.y + 3.0 * p.x * p.x - p.x * p.y + 0.5 * p.y * p.y;
    };
    const FEFunction fh = interpolate(v, m, f);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.0, 0.5);
    for (int k = 0; k < 50; ++k) {
      const Vec2 p{ux(rng), uy(rng)};
      CHECK(evaluate_scalar(fh, loc, p) == doctest::Approx(f(p)).epsilon(1e-13));
    }
  }
}

TEST_CASE("vector gradients of interpolated affine fields are exact") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 3, 2, 2);
  const FESpace v(ch.fluid, Family::P1, 2);
  const auto f = [](Vec2 p) { return Vec2{2.0 * p.x + p.y, -p.x + 3.0 * p.y}; };
  const FEFunction fh = interpolate(v, ch.fluid, f);
  for (int t = 0; t < ch.fluid.n_tris(); ++t) {
    const Mat2 g = eval_vector_grad(fh, ch.fluid, t, 0.25, 0.25);
    CHECK(g.xx == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(g.xy == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(g.yx == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(g.yy == doctest::Approx(3.0).epsilon(1e-13));
  }
}
