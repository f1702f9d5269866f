#include "robinfsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "robinfsi/errors.hpp"

namespace robinfsi {

const char* boundary_tag_name(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::Inlet: return "INLET";
    case BoundaryTag::Outlet: return "OUTLET";
    case BoundaryTag::Interface: return "INTERFACE";
    case BoundaryTag::SolidExternal: return "SOLID_EXTERNAL";
    case BoundaryTag::SolidClamped: return "SOLID_CLAMPED";
    case BoundaryTag::FluidWall: return "FLUID_WALL";
  }
  return "?";
}

namespace {

struct RectSpec {
  double x0, y0, length, height;
  int nx, ny;
  Mesh::Region region;
  BoundaryTag bottom, right, top, left;
};

Mesh make_rect_mesh(const RectSpec& spec) {
  Mesh m;
  m.region = spec.region;
  const int nx = spec.nx, ny = spec.ny;
  const double dx = spec.length / nx, dy = spec.height / ny;

  m.nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    // exact endpoints so conforming meshes share coordinates bit-for-bit
    const double y = (j == ny) ? spec.y0 + spec.height : spec.y0 + j * dy;
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? spec.x0 + spec.length : spec.x0 + i * dx;
      m.nodes.push_back({x, y});
    }
  }
  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };

  // every cell split along the lower-left -> upper-right diagonal
  m.tris.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = node(i, j), b = node(i + 1, j);
      const int c = node(i + 1, j + 1), d = node(i, j + 1);
      m.tris.push_back({a, b, c});
      m.tris.push_back({a, c, d});
    }
  }
  auto lower_tri = [nx](int i, int j) { return 2 * (j * nx + i); };
  auto upper_tri = [nx](int i, int j) { return 2 * (j * nx + i) + 1; };

  // boundary edges, oriented with the owner on the left
  for (int i = 0; i < nx; ++i)
    m.boundary.push_back({node(i, 0), node(i + 1, 0), spec.bottom, lower_tri(i, 0), 0});
  for (int j = 0; j < ny; ++j)
    m.boundary.push_back(
        {node(nx, j), node(nx, j + 1), spec.right, lower_tri(nx - 1, j), 1});
  for (int i = 0; i < nx; ++i)
    m.boundary.push_back({node(i + 1, ny), node(i, ny), spec.top, upper_tri(i, ny - 1), 1});
  for (int j = 0; j < ny; ++j)
    m.boundary.push_back({node(0, j + 1), node(0, j), spec.left, upper_tri(0, j), 2});
  return m;
}

}  // namespace

ChannelMeshes generate_channel_meshes(double length, double fluid_height,
                                      double solid_height, int nx,
                                      int ny_fluid, int ny_solid) {
  if (length <= 0 || fluid_height <= 0 || solid_height <= 0)
    fail(ErrorCode::ValidationError, "channel dimensions must be positive");
  if (nx < 1 || ny_fluid < 1 || ny_solid < 1)
    fail(ErrorCode::ValidationError, "subdivision counts must be >= 1");

  ChannelMeshes out;
  out.fluid = make_rect_mesh({0.0, 0.0, length, fluid_height, nx, ny_fluid,
                              Mesh::Region::Fluid, BoundaryTag::FluidWall,
                              BoundaryTag::Outlet, BoundaryTag::Interface,
                              BoundaryTag::Inlet});
  out.solid = make_rect_mesh({0.0, fluid_height, length, solid_height, nx,
                              ny_solid, Mesh::Region::Solid,
                              BoundaryTag::Interface, BoundaryTag::SolidClamped,
                              BoundaryTag::SolidExternal,
                              BoundaryTag::SolidClamped});
  for (int i = 0; i <= nx; ++i) {
    out.interface.fluid_nodes.push_back(ny_fluid * (nx + 1) + i);
    out.interface.solid_nodes.push_back(i);
  }
  return out;
}

double triangle_area(const Mesh& m, int tri) {
  const auto& t = m.tris[tri];
  return 0.5 * cross(m.nodes[t[1]] - m.nodes[t[0]], m.nodes[t[2]] - m.nodes[t[0]]);
}

double triangle_diameter(const Mesh& m, int tri) {
  const auto& t = m.tris[tri];
  const double a = norm(m.nodes[t[1]] - m.nodes[t[0]]);
  const double b = norm(m.nodes[t[2]] - m.nodes[t[1]]);
  const double c = norm(m.nodes[t[0]] - m.nodes[t[2]]);
  return std::max({a, b, c});
}

double max_diameter(const Mesh& m) {
  double h = 0.0;
  for (int t = 0; t < m.n_tris(); ++t) h = std::max(h, triangle_diameter(m, t));
  return h;
}

double total_area(const Mesh& m) {
  double a = 0.0;
  for (int t = 0; t < m.n_tris(); ++t) a += triangle_area(m, t);
  return a;
}

Mesh deform_mesh(const Mesh& mesh, std::span<const Vec2> displacement,
                 double min_area_ratio) {
  if (static_cast<int>(displacement.size()) != mesh.n_nodes())
    fail(ErrorCode::DimensionMismatch, "displacement size != node count");
  Mesh out = mesh;
  for (int i = 0; i < mesh.n_nodes(); ++i) out.nodes[i] += displacement[i];
  for (int t = 0; t < mesh.n_tris(); ++t) {
    const double a0 = triangle_area(mesh, t);
    const double a1 = triangle_area(out, t);
    if (a1 <= 0.0 || a1 < min_area_ratio * a0)
      fail(ErrorCode::TangledMesh,
           "element " + std::to_string(t) + " area ratio " +
               std::to_string(a1 / a0) + " below guard");
  }
  return out;
}

Mesh midpoint_mesh(const Mesh& a, const Mesh& b) {
  if (a.tris != b.tris || a.n_nodes() != b.n_nodes())
    fail(ErrorCode::ConnectivityMismatch, "midpoint_mesh: connectivity differs");
  Mesh out = a;
  for (int i = 0; i < a.n_nodes(); ++i)
    out.nodes[i] = 0.5 * (a.nodes[i] + b.nodes[i]);
  return out;
}

Vec2 boundary_normal(const Mesh& mesh, const BoundaryEdge& edge) {
  const Vec2 d = mesh.nodes[edge.b] - mesh.nodes[edge.a];
  const double len = norm(d);
  return {d.y / len, -d.x / len};
}

Vec2 boundary_normal(const Mesh& mesh, int a, int b) {
  for (const auto& e : mesh.boundary)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a))
      return boundary_normal(mesh, e);
  fail(ErrorCode::NotBoundary, "edge (" + std::to_string(a) + "," +
                                   std::to_string(b) + ") is not on the boundary");
}

void validate_mesh(const Mesh& m) {
  for (int t = 0; t < m.n_tris(); ++t)
    if (triangle_area(m, t) <= 0.0)
      fail(ErrorCode::TangledMesh, "non-positive area in triangle " + std::to_string(t));

  std::set<std::pair<int, int>> seen;
  for (const auto& e : m.boundary) {
    const auto key = std::minmax(e.a, e.b);
    if (!seen.insert(key).second)
      fail(ErrorCode::ValidationError, "boundary edge listed twice");
    const auto& tri = m.tris[e.tri];
    const int va = tri[e.local], vb = tri[(e.local + 1) % 3];
    if (va != e.a || vb != e.b)
      fail(ErrorCode::ValidationError, "boundary edge owner mismatch");
  }

  // interface edges must chain into a single polyline
  std::map<int, int> succ;
  std::set<int> heads, tails;
  for (const auto& e : m.boundary) {
    if (e.tag != BoundaryTag::Interface) continue;
    const int lo = (m.nodes[e.a].x < m.nodes[e.b].x) ? e.a : e.b;
    const int hi = (lo == e.a) ? e.b : e.a;
    succ[lo] = hi;
    heads.insert(lo);
    tails.insert(hi);
  }
  if (!succ.empty()) {
    std::vector<int> starts;
    for (int h : heads)
      if (!tails.count(h)) starts.push_back(h);
    if (starts.size() != 1)
      fail(ErrorCode::ValidationError, "interface polyline is disconnected");
    int cur = starts[0];
    size_t steps = 0;
    while (succ.count(cur)) {
      cur = succ[cur];
      ++steps;
    }
    if (steps != succ.size())
      fail(ErrorCode::ValidationError, "interface polyline is disconnected");
  }
}

std::vector<int> interface_nodes(const Mesh& m) {
  std::set<int> ids;
  for (const auto& e : m.boundary)
    if (e.tag == BoundaryTag::Interface) {
      ids.insert(e.a);
      ids.insert(e.b);
    }
  std::vector<int> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    if (m.nodes[a].x != m.nodes[b].x) return m.nodes[a].x < m.nodes[b].x;
    return a < b;
  });
  return out;
}

void write_mesh_text(const Mesh& m, const std::string& path) {
  std::ofstream f(path);
  f.precision(17);
  f << "nodes " << m.n_nodes() << "\n";
  for (const auto& p : m.nodes) f << p.x << " " << p.y << "\n";
  f << "triangles " << m.n_tris() << "\n";
  for (const auto& t : m.tris) f << t[0] << " " << t[1] << " " << t[2] << "\n";
  f << "boundary " << m.boundary.size() << "\n";
  for (const auto& e : m.boundary)
    f << e.a << " " << e.b << " " << boundary_tag_name(e.tag) << "\n";
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  lo_ = hi_ = mesh.nodes.empty() ? Vec2{} : mesh.nodes[0];
  for (const auto& p : mesh.nodes) {
    lo_.x = std::min(lo_.x, p.x);
    lo_.y = std::min(lo_.y, p.y);
    hi_.x = std::max(hi_.x, p.x);
    hi_.y = std::max(hi_.y, p.y);
  }
  const int target = std::max(1, static_cast<int>(std::sqrt(mesh.n_tris() / 2.0)));
  bx_ = by_ = target;
  bins_.assign(static_cast<size_t>(bx_) * by_, {});
  auto bin_of = [&](Vec2 p) {
    int ix = std::min(bx_ - 1, std::max(0, static_cast<int>((p.x - lo_.x) / (hi_.x - lo_.x + 1e-300) * bx_)));
    int iy = std::min(by_ - 1, std::max(0, static_cast<int>((p.y - lo_.y) / (hi_.y - lo_.y + 1e-300) * by_)));
    return std::pair{ix, iy};
  };
  for (int t = 0; t < mesh.n_tris(); ++t) {
    Vec2 tlo = mesh.nodes[mesh.tris[t][0]], thi = tlo;
    for (int k = 1; k < 3; ++k) {
      const Vec2 p = mesh.nodes[mesh.tris[t][k]];
      tlo.x = std::min(tlo.x, p.x);
      tlo.y = std::min(tlo.y, p.y);
      thi.x = std::max(thi.x, p.x);
      thi.y = std::max(thi.y, p.y);
    }
    const auto [ix0, iy0] = bin_of(tlo);
    const auto [ix1, iy1] = bin_of(thi);
    for (int iy = iy0; iy <= iy1; ++iy)
      for (int ix = ix0; ix <= ix1; ++ix)
        bins_[static_cast<size_t>(iy) * bx_ + ix].push_back(t);
  }
}

int PointLocator::locate(Vec2 p, double* r, double* s) const {
  const Mesh& m = *mesh_;
  int ix = std::min(bx_ - 1, std::max(0, static_cast<int>((p.x - lo_.x) / (hi_.x - lo_.x + 1e-300) * bx_)));
  int iy = std::min(by_ - 1, std::max(0, static_cast<int>((p.y - lo_.y) / (hi_.y - lo_.y + 1e-300) * by_)));
  const double tol = 1e-12 * (1.0 + norm(hi_ - lo_));
  for (int t : bins_[static_cast<size_t>(iy) * bx_ + ix]) {
    const auto& tri = m.tris[t];
    const Vec2 p0 = m.nodes[tri[0]];
    const Mat2 J{m.nodes[tri[1]].x - p0.x, m.nodes[tri[2]].x - p0.x,
                 m.nodes[tri[1]].y - p0.y, m.nodes[tri[2]].y - p0.y};
    const Vec2 rs = inverse(J) * (p - p0);
    if (rs.x >= -tol && rs.y >= -tol && rs.x + rs.y <= 1.0 + tol) {
      if (r) *r = rs.x;
      if (s) *s = rs.y;
      return t;
    }
  }
  return -1;
}

}  // namespace robinfsi
