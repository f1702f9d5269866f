#include <doctest.h>

#include <cmath>
#include <random>

#include "robinfsi/errors.hpp"
#include "robinfsi/fe_space.hpp"
#include "robinfsi/mesh.hpp"

using namespace robinfsi;

TEST_CASE("minimal channel pair") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 1, 1, 1);
  CHECK(ch.fluid.n_tris() == 2);
  CHECK(ch.solid.n_tris() == 2);
  CHECK(ch.fluid.n_nodes() == 4);
  CHECK(ch.solid.n_nodes() == 4);
  CHECK(ch.interface.size() == 2);
  validate_mesh(ch.fluid);
  validate_mesh(ch.solid);
}

TEST_CASE("triangle counts follow 2 nx ny") {
  const ChannelMeshes ch = generate_channel_meshes(6.0, 0.5, 0.1, 60, 25, 10);
  CHECK(ch.fluid.n_tris() == 2 * 60 * 25);
  CHECK(ch.solid.n_tris() == 2 * 60 * 10);
  // enumeration for a couple of smaller grids
  for (int nx : {1, 3, 7})
    for (int ny : {1, 2, 5}) {
      const ChannelMeshes c2 = generate_channel_meshes(1.0, 0.5, 0.5, nx, ny, ny);
      CHECK(c2.fluid.n_tris() == 2 * nx * ny);
    }
}

TEST_CASE("uniform grid areas") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 10, 5, 5);
  for (int t = 0; t < ch.fluid.n_tris(); ++t)
    CHECK(triangle_area(ch.fluid, t) == doctest::Approx(0.005).epsilon(1e-13));
}

TEST_CASE("rejects bad channel arguments") {
  CHECK_THROWS_AS(generate_channel_meshes(0.0, 0.5, 0.5, 1, 1, 1), Error);
  CHECK_THROWS_AS(generate_channel_meshes(1.0, -0.5, 0.5, 1, 1, 1), Error);
  CHECK_THROWS_AS(generate_channel_meshes(1.0, 0.5, 0.5, 0, 1, 1), Error);
}

TEST_CASE("area sums match the rectangles before and after rigid motion") {
  const ChannelMeshes ch = generate_channel_meshes(2.0, 0.5, 0.25, 8, 4, 3);
  CHECK(total_area(ch.fluid) == doctest::Approx(2.0 * 0.5).epsilon(1e-12));
  CHECK(total_area(ch.solid) == doctest::Approx(2.0 * 0.25).epsilon(1e-12));

  std::vector<Vec2> shift(ch.fluid.n_nodes(), Vec2{0.1, 0.0});
  const Mesh moved = deform_mesh(ch.fluid, shift);
  for (int t = 0; t < moved.n_tris(); ++t)
    CHECK(triangle_area(moved, t) ==
          doctest::Approx(triangle_area(ch.fluid, t)).epsilon(1e-14));
}

TEST_CASE("deform_mesh identity and tangling") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 4, 2, 2);
  std::vector<Vec2> zero(ch.fluid.n_nodes());
  const Mesh same = deform_mesh(ch.fluid, zero);
  for (int i = 0; i < same.n_nodes(); ++i) {
    CHECK(same.nodes[i].x == ch.fluid.nodes[i].x);
    CHECK(same.nodes[i].y == ch.fluid.nodes[i].y);
  }

  // push one node across its opposite edge
  std::vector<Vec2> bad(ch.fluid.n_nodes());
  bad[0] = {1.0, 1.0};
  CHECK_THROWS_AS(deform_mesh(ch.fluid, bad), Error);
  try {
    deform_mesh(ch.fluid, bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TangledMesh);
  }
}

TEST_CASE("midpoint_mesh") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 5, 3, 3);
  const Mesh& a = ch.fluid;

  SUBCASE("idempotent") {
    const Mesh m = midpoint_mesh(a, a);
    CHECK(m.tris == a.tris);
    for (int i = 0; i < a.n_nodes(); ++i) {
      CHECK(m.nodes[i].x == a.nodes[i].x);
      CHECK(m.nodes[i].y == a.nodes[i].y);
    }
  }

  SUBCASE("translation halves") {
    const double h = 0.03;
    std::vector<Vec2> shift(a.n_nodes(), Vec2{2 * h, 0.0});
    const Mesh b = deform_mesh(a, shift);
    const Mesh m = midpoint_mesh(a, b);
    for (int i = 0; i < a.n_nodes(); ++i)
      CHECK(m.nodes[i].x == doctest::Approx(a.nodes[i].x + h).epsilon(1e-15));
  }

  SUBCASE("random perturbation matches direct mean") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.01, 0.01);
    std::vector<Vec2> d(a.n_nodes());
    for (auto& v : d) v = {u(rng), u(rng)};
    const Mesh b = deform_mesh(a, d);
    const Mesh m = midpoint_mesh(a, b);
    for (int i = 0; i < a.n_nodes(); ++i) {
      CHECK(m.nodes[i].x ==
            doctest::Approx(0.5 * (a.nodes[i].x + b.nodes[i].x)).epsilon(1e-15));
      CHECK(m.nodes[i].y ==
            doctest::Approx(0.5 * (a.nodes[i].y + b.nodes[i].y)).epsilon(1e-15));
    }
  }

  SUBCASE("connectivity mismatch") {
    const ChannelMeshes other = generate_channel_meshes(1.0, 0.5, 0.5, 6, 3, 3);
    CHECK_THROWS_AS(midpoint_mesh(a, other.fluid), Error);
  }
}

TEST_CASE("boundary normals") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 4, 2, 2);
  for (const auto& e : ch.fluid.boundary) {
    const Vec2 n = boundary_normal(ch.fluid, e);
    switch (e.tag) {
      case BoundaryTag::FluidWall:
        CHECK(n.x == doctest::Approx(0.0));
        CHECK(n.y == doctest::Approx(-1.0));
        break;
      case BoundaryTag::Inlet:
        CHECK(n.x == doctest::Approx(-1.0));
        CHECK(n.y == doctest::Approx(0.0));
        break;
      case BoundaryTag::Outlet:
        CHECK(n.x == doctest::Approx(1.0));
        break;
      case BoundaryTag::Interface:
        CHECK(n.y == doctest::Approx(1.0));
        break;
      default:
        break;
    }
  }
  CHECK_THROWS_AS(boundary_normal(ch.fluid, 0, ch.fluid.n_nodes() - 1), Error);
}

TEST_CASE("normals rotate with the mesh") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 3, 2, 2);
  Mesh rotated = ch.fluid;
  for (auto& p : rotated.nodes) p = {-p.y, p.x};  // 90° rotation
  for (size_t k = 0; k < ch.fluid.boundary.size(); ++k) {
    const Vec2 n0 = boundary_normal(ch.fluid, ch.fluid.boundary[k]);
    const Vec2 n1 = boundary_normal(rotated, rotated.boundary[k]);
    CHECK(n1.x == doctest::Approx(-n0.y).epsilon(1e-14));
    CHECK(n1.y == doctest::Approx(n0.x).epsilon(1e-14));
  }
}

TEST_CASE("interface pairs coincide exactly") {
  const ChannelMeshes ch = generate_channel_meshes(6.0, 0.5, 0.1, 30, 10, 4);
  for (int k = 0; k < ch.interface.size(); ++k) {
    const Vec2 a = ch.fluid.nodes[ch.interface.fluid_nodes[k]];
    const Vec2 b = ch.solid.nodes[ch.interface.solid_nodes[k]];
    CHECK(norm(a - b) <= 1e-12 * (1.0 + norm(a)));
  }
}

TEST_CASE("point locator finds containing triangles") {
  const ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 7, 4, 4);
  const PointLocator loc(ch.fluid);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.0, 0.5);
  for (int k = 0; k < 200; ++k) {
    double r, s;
    const Vec2 p{ux(rng), uy(rng)};
    const int t = loc.locate(p, &r, &s);
    REQUIRE(t >= 0);
    const ElementGeometry eg = element_geometry(ch.fluid, t);
    const Vec2 back = eg.map(r, s);
    CHECK(norm(back - p) < 1e-12);
  }
  CHECK(loc.locate({2.0, 2.0}) == -1);
}
