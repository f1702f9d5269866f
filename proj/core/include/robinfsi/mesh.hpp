#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "robinfsi/vec.hpp"

namespace robinfsi {

enum class BoundaryTag {
  Inlet,
  Outlet,
  Interface,
  SolidExternal,
  SolidClamped,
  FluidWall,
};

const char* boundary_tag_name(BoundaryTag t);

struct BoundaryEdge {
  int a = -1, b = -1;      // endpoint node ids, oriented so the owner lies left
  BoundaryTag tag = BoundaryTag::FluidWall;
  int tri = -1;            // owning triangle
  int local = -1;          // local edge index in the owner: edge k = (v_k, v_{k+1 mod 3})
};

/// Conforming triangulation of one of the two rectangular channels.
/// Meshes are immutable after construction; deformation returns a new mesh.
struct Mesh {
  enum class Region { Fluid, Solid };

  std::vector<Vec2> nodes;                    // cm
  std::vector<std::array<int, 3>> tris;       // counter-clockwise
  std::vector<BoundaryEdge> boundary;
  Region region = Region::Fluid;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_tris() const { return static_cast<int>(tris.size()); }
};

/// One node pair per interface node, identical reference coordinates on Γ̂,
/// ordered by increasing x along the interface polyline.
struct InterfaceMap {
  std::vector<int> fluid_nodes;
  std::vector<int> solid_nodes;

  int size() const { return static_cast<int>(fluid_nodes.size()); }
};

struct ChannelMeshes {
  Mesh fluid;
  Mesh solid;
  InterfaceMap interface;
};

/// Structured crossed-diagonal meshes of the fluid channel
/// (0,length)x(0,fluid_height) and the solid channel
/// (0,length)x(fluid_height, fluid_height+solid_height), conforming along
/// the shared interface line.
ChannelMeshes generate_channel_meshes(double length, double fluid_height,
                                      double solid_height, int nx,
                                      int ny_fluid, int ny_solid);

double triangle_area(const Mesh& m, int tri);
double triangle_diameter(const Mesh& m, int tri);
double max_diameter(const Mesh& m);
double total_area(const Mesh& m);

/// Shifts node coordinates by the given nodal displacement. Rejects
/// configurations where any element area drops below min_area_ratio times
/// its undeformed value (TANGLED_MESH).
Mesh deform_mesh(const Mesh& mesh, std::span<const Vec2> displacement,
                 double min_area_ratio = 1e-3);

/// Node-wise arithmetic mean of two meshes sharing connectivity.
Mesh midpoint_mesh(const Mesh& a, const Mesh& b);

/// Outward unit normal of a boundary edge.
Vec2 boundary_normal(const Mesh& mesh, const BoundaryEdge& edge);
Vec2 boundary_normal(const Mesh& mesh, int a, int b);  // NOT_BOUNDARY if absent

/// Checks the structural invariants (positive areas, single-owner boundary
/// edges, connected interface polyline); throws on violation.
void validate_mesh(const Mesh& m);

/// Interface node ids ordered along the polyline (ascending x).
std::vector<int> interface_nodes(const Mesh& m);

void write_mesh_text(const Mesh& m, const std::string& path);

/// Uniform-bin point location for evaluating fields on (possibly deformed)
/// meshes. Returns -1 when the point lies outside.
class PointLocator {
public:
  explicit PointLocator(const Mesh& mesh);
  int locate(Vec2 p, double* r = nullptr, double* s = nullptr) const;
  const Mesh& mesh() const { return *mesh_; }

private:
  const Mesh* mesh_;
  Vec2 lo_, hi_;
  int bx_ = 0, by_ = 0;
  std::vector<std::vector<int>> bins_;
};

}  // namespace robinfsi
