#include <gtest/gtest.h>

#include <sstream>

#include "chsd/errors.hpp"
#include "chsd/mesh.hpp"

namespace chsd {
namespace {

int count_region(const KarstMesh& m, Region r) {
  int n = 0;
  for (Region x : m.regions()) n += x == r;
  return n;
}

double total_area(const KarstMesh& m) {
  double a = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) a += m.triangle_area(t);
  return a;
}

TEST(KarstMesh, SmallestGridCounts) {
  const KarstMesh m = build_karst_mesh(1, 2, 0.5);
  EXPECT_EQ(m.num_vertices(), 6);
  EXPECT_EQ(m.num_triangles(), 4);
  EXPECT_EQ(m.interface_edges().size(), 1u);
  EXPECT_EQ(count_region(m, Region::Conduit), 2);
  EXPECT_EQ(count_region(m, Region::Matrix), 2);
}

TEST(KarstMesh, TwoByFourCounts) {
  const KarstMesh m = build_karst_mesh(2, 4, 0.5);
  EXPECT_EQ(m.num_vertices(), 15);
  EXPECT_EQ(m.num_triangles(), 16);
  EXPECT_EQ(m.interface_edges().size(), 2u);
}

TEST(KarstMesh, SplitOffGridLineIsRejected) {
  EXPECT_THROW(build_karst_mesh(2, 3, 0.5), MisalignedSplit);
  EXPECT_THROW(build_karst_mesh(2, 4, 0.5, Box{0, 0, 0, 1}), DegenerateBox);
}

TEST(KarstMesh, ConduitLiesAboveSplit) {
  const KarstMesh m = build_karst_mesh(3, 4, 0.25);
  for (int t = 0; t < m.num_triangles(); ++t) {
    Vec2 c = Vec2::Zero();
    for (int v : m.triangles()[t]) c += m.vertices()[v] / 3.0;
    EXPECT_EQ(m.region(t), c.y() > 0.25 ? Region::Conduit : Region::Matrix);
  }
}

TEST(KarstMesh, InterfaceFrameIsOrthonormalAndPointsIntoMatrix) {
  const KarstMesh m = build_karst_mesh(4, 4, 0.5);
  for (const InterfaceEdge& e : m.interface_edges()) {
    EXPECT_NEAR(e.normal.x(), 0.0, 1e-14);
    EXPECT_NEAR(e.normal.y(), -1.0, 1e-14);
    EXPECT_NEAR(e.normal.norm(), 1.0, 1e-14);
    EXPECT_NEAR(e.normal.dot(e.tangent), 0.0, 1e-14);
    EXPECT_EQ(m.region(e.conduit_triangle), Region::Conduit);
    EXPECT_EQ(m.region(e.matrix_triangle), Region::Matrix);
  }
  for (const InterfaceFrame& f : interface_frames(m)) EXPECT_NEAR(f.normal.dot(f.tangent), 0.0, 1e-14);
}

TEST(KarstMesh, BoundaryTagsFollowRegions) {
  const KarstMesh m = build_karst_mesh(2, 4, 0.5);
  int gc = 0, gm = 0, gcm = 0;
  for (const TaggedEdge& e : m.boundary_edges()) {
    const auto& ev = m.edges()[e.edge].vertices;
    const double ymid = 0.5 * (m.vertices()[ev[0]].y() + m.vertices()[ev[1]].y());
    if (e.tag == BoundaryTag::GammaC) {
      ++gc;
      EXPECT_GT(ymid, 0.5);
    } else if (e.tag == BoundaryTag::GammaM) {
      ++gm;
      EXPECT_LT(ymid, 0.5);
    } else {
      ++gcm;
    }
    EXPECT_NEAR(e.normal.norm(), 1.0, 1e-14);
  }
  // Top (2) + two sides of two rows each (4) for each region.
  EXPECT_EQ(gc, 6);
  EXPECT_EQ(gm, 6);
  EXPECT_LE(gcm, 2);
}

TEST(KarstMesh, RefinementQuadruplesTrianglesAndDoublesInterface) {
  KarstMesh m = build_karst_mesh(1, 2, 0.5);
  const double area = total_area(m);
  for (int level = 1; level <= 3; ++level) {
    const std::size_t ni = m.interface_edges().size();
    const int nt = m.num_triangles();
    const int nv = m.num_vertices();
    const int ne = m.num_edges();
    KarstMesh r = refine_uniform(m);
    EXPECT_EQ(r.num_triangles(), 4 * nt);
    EXPECT_EQ(r.interface_edges().size(), 2 * ni);
    EXPECT_EQ(r.num_vertices(), nv + ne);
    EXPECT_NEAR(total_area(r), area, 1e-13 * area);
    for (int v = 0; v < nv; ++v) EXPECT_EQ(r.vertices()[v], m.vertices()[v]);
    m = std::move(r);
  }
  EXPECT_EQ(m.num_triangles(), 256);
}

TEST(KarstMesh, RefinedMeshMatchesFinerGridCounts) {
  const KarstMesh a = refine_uniform(build_karst_mesh(2, 2, 0.5));
  const KarstMesh b = build_karst_mesh(4, 4, 0.5);
  EXPECT_EQ(a.num_vertices(), b.num_vertices());
  EXPECT_EQ(a.num_edges(), b.num_edges());
  EXPECT_EQ(a.interface_edges().size(), b.interface_edges().size());
  EXPECT_NEAR(a.mesh_size(), b.mesh_size(), 1e-14);
}

TEST(KarstMesh, DumpRoundTrip) {
  const KarstMesh m = build_karst_mesh(3, 4, 0.5, Box{-1.0, 0.0, 2.0, 2.0});
  std::stringstream ss;
  write_mesh_dump(ss, m);
  const KarstMesh r = read_mesh_dump(ss);
  EXPECT_EQ(r.vertices(), m.vertices());
  EXPECT_EQ(r.triangles(), m.triangles());
  EXPECT_EQ(r.regions(), m.regions());
  EXPECT_EQ(r.interface_edges().size(), m.interface_edges().size());
}

TEST(KarstMesh, TrianglesAreCounterclockwise) {
  const KarstMesh m = build_karst_mesh(5, 6, 0.5, Box{0.0, 0.0, 2.0, 3.0});
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles()[t];
    const Vec2 a = m.vertices()[tri[1]] - m.vertices()[tri[0]];
    const Vec2 b = m.vertices()[tri[2]] - m.vertices()[tri[0]];
    EXPECT_GT(a.x() * b.y() - a.y() * b.x(), 0.0);
  }
}

}  // namespace
}  // namespace chsd
