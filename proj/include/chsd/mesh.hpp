#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace chsd {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class Region : std::uint8_t { Conduit, Matrix };

/// Boundary tags. GammaCM marks the conduit/matrix interface, which is
/// interior to the domain.
enum class BoundaryTag : std::uint8_t { GammaC, GammaM, GammaCM };

std::string to_string(Region region);
std::string to_string(BoundaryTag tag);

struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

struct MeshEdge {
  std::array<int, 2> vertices;
  // Adjacent triangles; second entry is -1 on the outer boundary.
  std::array<int, 2> triangles{-1, -1};
};

/// Edge on the outer boundary or on the interface. `normal` is the outward
/// unit normal for outer edges and n_cm (conduit -> matrix) for GammaCM.
struct TaggedEdge {
  int edge = -1;
  BoundaryTag tag = BoundaryTag::GammaC;
  Vec2 normal = Vec2::Zero();
};

struct InterfaceEdge {
  int edge = -1;
  int conduit_triangle = -1;
  int matrix_triangle = -1;
  Vec2 normal = Vec2::Zero();   // n_cm, points from the conduit into the matrix
  Vec2 tangent = Vec2::Zero();  // tau_1, n_cm rotated by +90 degrees
};

struct InterfaceFrame {
  Vec2 normal;
  Vec2 tangent;
};

/// Conforming triangulation of the karst rectangle. Immutable once built.
///
/// Local edge i of a triangle is the edge opposite its local vertex i.
class KarstMesh {
 public:
  /// Builds the mesh from raw connectivity, deriving the edge table,
  /// boundary tags and interface frames. Triangles must be counterclockwise.
  static KarstMesh from_triangles(std::vector<Vec2> vertices,
                                  std::vector<std::array<int, 3>> triangles,
                                  std::vector<Region> regions, Box bbox);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Region>& regions() const { return regions_; }
  Region region(int t) const { return regions_[t]; }
  const std::vector<MeshEdge>& edges() const { return edges_; }
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
  const std::vector<TaggedEdge>& boundary_edges() const { return boundary_edges_; }
  const std::vector<InterfaceEdge>& interface_edges() const { return interface_edges_; }
  const Box& bbox() const { return bbox_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Maximum triangle diameter.
  double mesh_size() const { return mesh_size_; }
  double triangle_area(int t) const;
  double edge_length(int e) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Region> regions_;
  std::vector<MeshEdge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<TaggedEdge> boundary_edges_;
  std::vector<InterfaceEdge> interface_edges_;
  Box bbox_;
  double mesh_size_ = 0.0;
};

/// Structured nx-by-ny grid, each cell cut along its (x0,y0)-(x1,y1)
/// diagonal. The conduit is the strip above `split_y`, given as a fraction
/// of the box height and required to fall on a grid line.
KarstMesh build_karst_mesh(int nx, int ny, double split_y = 0.5, Box bbox = {});

/// Per-interface-edge (n_cm, tau_1), in interface-edge order.
std::vector<InterfaceFrame> interface_frames(const KarstMesh& mesh);

/// Red refinement: each triangle split into four by its edge midpoints.
/// Old vertices keep their indices; midpoint of edge e becomes vertex nv + e.
KarstMesh refine_uniform(const KarstMesh& mesh);

/// Plain-text dump: `v x y`, `t i j k region`, `e i j tag` lines.
void write_mesh_dump(std::ostream& out, const KarstMesh& mesh);
KarstMesh read_mesh_dump(std::istream& in);

}  // namespace chsd
