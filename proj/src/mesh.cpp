#include "chsd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "chsd/errors.hpp"

namespace chsd {

std::string to_string(Region region) {
  return region == Region::Conduit ? "conduit" : "matrix";
}

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::GammaC:
      return "GammaC";
    case BoundaryTag::GammaM:
      return "GammaM";
    case BoundaryTag::GammaCM:
      return "GammaCM";
  }
  return "?";
}

namespace {

Vec2 outward_normal(const Vec2& a, const Vec2& b) {
  // Edge a->b traversed counterclockwise around its triangle.
  const Vec2 d = b - a;
  return Vec2(d.y(), -d.x()).normalized();
}

}  // namespace

KarstMesh KarstMesh::from_triangles(std::vector<Vec2> vertices,
                                    std::vector<std::array<int, 3>> triangles,
                                    std::vector<Region> regions, Box bbox) {
  if (triangles.size() != regions.size()) {
    throw DimensionMismatch("triangle and region counts differ");
  }
  KarstMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  mesh.regions_ = std::move(regions);
  mesh.bbox_ = bbox;

  const int nt = mesh.num_triangles();
  mesh.triangle_edges_.resize(nt);
  std::map<std::pair<int, int>, int> edge_index;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles_[t];
    if (mesh.triangle_area(t) <= 0.0) {
      throw DegenerateBox("triangle " + std::to_string(t) + " has nonpositive area");
    }
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3];
      const int b = tri[(i + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.emplace(key, mesh.num_edges());
      if (inserted) {
        MeshEdge edge;
        edge.vertices = {key.first, key.second};
        edge.triangles = {t, -1};
        mesh.edges_.push_back(edge);
      } else {
        mesh.edges_[it->second].triangles[1] = t;
      }
      mesh.triangle_edges_[t][i] = it->second;
    }
  }

  for (int e = 0; e < mesh.num_edges(); ++e) {
    const MeshEdge& edge = mesh.edges_[e];
    const int t0 = edge.triangles[0];
    const int t1 = edge.triangles[1];
    auto normal_from = [&](int t) {
      const auto& tri = mesh.triangles_[t];
      const auto& te = mesh.triangle_edges_[t];
      for (int i = 0; i < 3; ++i) {
        if (te[i] == e) {
          return outward_normal(mesh.vertices_[tri[(i + 1) % 3]], mesh.vertices_[tri[(i + 2) % 3]]);
        }
      }
      return Vec2(Vec2::Zero());
    };
    if (t1 < 0) {
      TaggedEdge tagged;
      tagged.edge = e;
      tagged.tag = mesh.regions_[t0] == Region::Conduit ? BoundaryTag::GammaC : BoundaryTag::GammaM;
      tagged.normal = normal_from(t0);
      mesh.boundary_edges_.push_back(tagged);
    } else if (mesh.regions_[t0] != mesh.regions_[t1]) {
      InterfaceEdge iface;
      iface.edge = e;
      iface.conduit_triangle = mesh.regions_[t0] == Region::Conduit ? t0 : t1;
      iface.matrix_triangle = mesh.regions_[t0] == Region::Conduit ? t1 : t0;
      iface.normal = normal_from(iface.conduit_triangle);
      iface.tangent = Vec2(-iface.normal.y(), iface.normal.x());
      mesh.interface_edges_.push_back(iface);
      TaggedEdge tagged;
      tagged.edge = e;
      tagged.tag = BoundaryTag::GammaCM;
      tagged.normal = iface.normal;
      mesh.boundary_edges_.push_back(tagged);
    }
  }

  for (int e = 0; e < mesh.num_edges(); ++e) {
    mesh.mesh_size_ = std::max(mesh.mesh_size_, mesh.edge_length(e));
  }
  return mesh;
}

double KarstMesh::triangle_area(int t) const {
  const auto& tri = triangles_[t];
  const Vec2 a = vertices_[tri[1]] - vertices_[tri[0]];
  const Vec2 b = vertices_[tri[2]] - vertices_[tri[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double KarstMesh::edge_length(int e) const {
  const auto& v = edges_[e].vertices;
  return (vertices_[v[1]] - vertices_[v[0]]).norm();
}

KarstMesh build_karst_mesh(int nx, int ny, double split_y, Box bbox) {
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0)) {
    throw DegenerateBox("bounding box must have positive extent");
  }
  if (nx < 1 || ny < 2) {
    throw InputError("need nx >= 1 and ny >= 2");
  }
  const double rows = ny * split_y;
  const double split_row = std::round(rows);
  if (std::abs(rows - split_row) > 1e-12 || split_row < 1 || split_row > ny - 1) {
    std::ostringstream msg;
    msg << "split_y = " << split_y << " is not an interior grid line of a " << ny << "-row grid";
    throw MisalignedSplit(msg.str());
  }
  const int js = static_cast<int>(split_row);

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    // Pin the interface row exactly so both sides see identical coordinates.
    const double y = j == ny ? bbox.y1 : bbox.y0 + bbox.height() * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? bbox.x1 : bbox.x0 + bbox.width() * i / nx;
      vertices.emplace_back(x, y);
    }
  }
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  std::vector<std::array<int, 3>> triangles;
  std::vector<Region> regions;
  triangles.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    const Region region = j >= js ? Region::Conduit : Region::Matrix;
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      triangles.push_back({a, b, c});
      triangles.push_back({a, c, d});
      regions.push_back(region);
      regions.push_back(region);
    }
  }
  return KarstMesh::from_triangles(std::move(vertices), std::move(triangles), std::move(regions), bbox);
}

std::vector<InterfaceFrame> interface_frames(const KarstMesh& mesh) {
  std::vector<InterfaceFrame> frames;
  frames.reserve(mesh.interface_edges().size());
  for (const auto& e : mesh.interface_edges()) {
    frames.push_back({e.normal, e.tangent});
  }
  return frames;
}

KarstMesh refine_uniform(const KarstMesh& mesh) {
  std::vector<Vec2> vertices = mesh.vertices();
  const int nv = mesh.num_vertices();
  for (const auto& edge : mesh.edges()) {
    vertices.push_back(0.5 * (mesh.vertices()[edge.vertices[0]] + mesh.vertices()[edge.vertices[1]]));
  }
  std::vector<std::array<int, 3>> triangles;
  std::vector<Region> regions;
  triangles.reserve(4 * mesh.triangles().size());
  regions.reserve(4 * mesh.triangles().size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangles()[t];
    const auto& e = mesh.triangle_edges(t);
    const int m0 = nv + e[0], m1 = nv + e[1], m2 = nv + e[2];
    for (const auto& child : {std::array<int, 3>{v[0], m2, m1}, std::array<int, 3>{m2, v[1], m0},
                              std::array<int, 3>{m1, m0, v[2]}, std::array<int, 3>{m0, m1, m2}}) {
      triangles.push_back(child);
      regions.push_back(mesh.region(t));
    }
  }
  return KarstMesh::from_triangles(std::move(vertices), std::move(triangles), std::move(regions), mesh.bbox());
}

void write_mesh_dump(std::ostream& out, const KarstMesh& mesh) {
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) {
    out << "v " << v.x() << ' ' << v.y() << '\n';
  }
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    out << "t " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << to_string(mesh.region(t)) << '\n';
  }
  for (const auto& b : mesh.boundary_edges()) {
    const auto& v = mesh.edges()[b.edge].vertices;
    out << "e " << v[0] << ' ' << v[1] << ' ' << to_string(b.tag) << '\n';
  }
}

KarstMesh read_mesh_dump(std::istream& in) {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Region> regions;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string kind;
    if (!(ss >> kind)) continue;
    if (kind == "v") {
      double x, y;
      if (!(ss >> x >> y)) throw ParseError(lineno, "malformed vertex");
      vertices.emplace_back(x, y);
    } else if (kind == "t") {
      std::array<int, 3> tri;
      std::string region;
      if (!(ss >> tri[0] >> tri[1] >> tri[2] >> region)) throw ParseError(lineno, "malformed triangle");
      if (region != "conduit" && region != "matrix") throw ParseError(lineno, "unknown region " + region);
      triangles.push_back(tri);
      regions.push_back(region == "conduit" ? Region::Conduit : Region::Matrix);
    } else if (kind != "e") {
      throw ParseError(lineno, "unknown record " + kind);
    }
  }
  if (vertices.empty()) throw ParseError(lineno, "no vertices");
  Box box{vertices[0].x(), vertices[0].y(), vertices[0].x(), vertices[0].y()};
  for (const auto& v : vertices) {
    box.x0 = std::min(box.x0, v.x());
    box.y0 = std::min(box.y0, v.y());
    box.x1 = std::max(box.x1, v.x());
    box.y1 = std::max(box.y1, v.y());
  }
  return KarstMesh::from_triangles(std::move(vertices), std::move(triangles), std::move(regions), box);
}

}  // namespace chsd
