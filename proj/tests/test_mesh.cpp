#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "chemotaxis/mesh.hpp"
#include "chemotaxis/operators.hpp"

using namespace chemotaxis;

namespace {

Mesh box(int dim, std::vector<double> lengths, std::vector<std::size_t> cells) {
  return build_box_mesh(dim, lengths, cells);
}

}  // namespace

TEST(BoxMesh, OneDimensional) {
  const Mesh m = box(1, {1.0}, {4});
  ASSERT_EQ(m.num_cells(), 4u);
  ASSERT_EQ(m.num_faces(), 3u);
  for (const auto& c : m.cells()) EXPECT_DOUBLE_EQ(c.volume, 0.25);
  for (const auto& f : m.faces()) {
    EXPECT_DOUBLE_EQ(f.area, 1.0);
    EXPECT_DOUBLE_EQ(f.distance, 0.25);
  }
  EXPECT_DOUBLE_EQ(m.h(), 0.25);
}

TEST(BoxMesh, UnitSquareVolume) {
  const Mesh m = box(2, {1.0, 1.0}, {10, 10});
  EXPECT_EQ(m.num_cells(), 100u);
  EXPECT_NEAR(m.domain_volume(), 1.0, 1e-14);
}

TEST(BoxMesh, CubeFaceCount) {
  const Mesh m = box(3, {1.0, 1.0, 1.0}, {2, 2, 2});
  EXPECT_EQ(m.num_cells(), 8u);
  EXPECT_EQ(m.num_faces(), 12u);
}

TEST(BoxMesh, Rejections) {
  EXPECT_THROW(box(2, {1.0, -1.0}, {4, 4}), std::invalid_argument);
  EXPECT_THROW(box(2, {1.0, 1.0}, {4, 1}), std::invalid_argument);
  EXPECT_THROW(box(2, {1.0}, {4}), std::invalid_argument);
  EXPECT_THROW(box(4, {1, 1, 1, 1}, {2, 2, 2, 2}), std::invalid_argument);
}

TEST(BoxMesh, FaceInvariants) {
  const Mesh m = box(3, {1.0, 2.0, 0.5}, {3, 4, 5});
  for (const auto& f : m.faces()) {
    EXPECT_NE(f.owner, f.neighbor);
    EXPECT_LT(f.owner, m.num_cells());
    EXPECT_LT(f.neighbor, m.num_cells());
    EXPECT_NEAR(std::hypot(f.normal[0], f.normal[1], f.normal[2]), 1.0, 1e-15);
    EXPECT_GT(f.distance, 0.0);
  }
}

TEST(BoxMesh, ClosedSurfaceOnFullCells) {
  const Mesh m = box(3, {1.0, 1.0, 1.0}, {4, 4, 4});
  for (std::size_t i = 0; i < m.num_cells(); ++i) {
    if (m.cell_faces(i).size() != 6) continue;  // interior cells only
    Vec3 s{};
    for (std::size_t f : m.cell_faces(i)) {
      const Face& face = m.face(f);
      const double orient = face.owner == i ? 1.0 : -1.0;
      for (int a = 0; a < 3; ++a) s[a] += orient * face.area * face.normal[a];
    }
    for (int a = 0; a < 3; ++a) EXPECT_NEAR(s[a], 0.0, 1e-15);
  }
}

TEST(BoxMesh, DivergenceOfConstantVectorFieldVanishes) {
  const Mesh m = box(2, {1.0, 1.0}, {7, 5});
  const Vec3 w{0.3, -1.7, 0.0};
  FaceFlux flux(m);
  for (std::size_t f = 0; f < m.num_faces(); ++f) {
    const Face& face = m.face(f);
    flux[f] = face.area * (w[0] * face.normal[0] + w[1] * face.normal[1]);
  }
  // Boundary cells see only part of their surface (zero-flux walls), so the
  // telescoping check applies to cells with a full set of faces.
  const Field div = divergence(flux, m);
  for (std::size_t i = 0; i < m.num_cells(); ++i)
    if (m.cell_faces(i).size() == 4) {
      EXPECT_NEAR(div[i], 0.0, 1e-13);
    }
}

TEST(BallMesh, DiskArea) {
  const Mesh m = build_ball_mesh(2, 1.0, 1.0 / 16.0);
  EXPECT_GE(m.domain_volume(), 0.95 * std::numbers::pi);
  EXPECT_LE(m.domain_volume(), 1.05 * std::numbers::pi);
}

TEST(BallMesh, BallVolume) {
  const Mesh m = build_ball_mesh(3, 1.0, 1.0 / 16.0);
  const double exact = 4.0 / 3.0 * std::numbers::pi;
  EXPECT_NEAR(m.domain_volume(), exact, 0.05 * exact);
}

TEST(BallMesh, TooCoarse) {
  EXPECT_THROW(build_ball_mesh(2, 1.0, 0.6), std::invalid_argument);
  EXPECT_THROW(build_ball_mesh(2, 1.0, 0.25), std::invalid_argument);
}

TEST(BallMesh, ReflectionSymmetry) {
  for (int dim : {2, 3}) {
    const Mesh m = build_ball_mesh(dim, 1.0, 0.1);
    std::size_t per_orthant[8] = {};
    std::size_t off_axis = 0;
    for (const auto& c : m.cells()) {
      bool on_plane = false;
      int code = 0;
      for (int a = 0; a < dim; ++a) {
        if (std::abs(c.center[a]) < 1e-12) on_plane = true;
        if (c.center[a] > 0) code |= 1 << a;
      }
      if (on_plane) continue;
      ++off_axis;
      ++per_orthant[code];
    }
    const std::size_t orthants = std::size_t{1} << dim;
    for (std::size_t o = 1; o < orthants; ++o) EXPECT_EQ(per_orthant[o], per_orthant[0]) << "dim " << dim;
    EXPECT_EQ(off_axis, per_orthant[0] * orthants);
  }
}

TEST(BallMesh, OriginCellExists) {
  const Mesh m = build_ball_mesh(3, 1.0, 0.1);
  bool found = false;
  for (const auto& c : m.cells()) found |= std::hypot(c.center[0], c.center[1], c.center[2]) < 1e-12;
  EXPECT_TRUE(found);
}

TEST(BallMesh, RefinementScaling) {
  for (int dim : {2, 3}) {
    const double coarse = static_cast<double>(build_ball_mesh(dim, 1.0, 0.1).num_cells());
    const double fine = static_cast<double>(build_ball_mesh(dim, 1.0, 0.05).num_cells());
    const double ratio = fine / coarse;
    EXPECT_NEAR(ratio, std::pow(2.0, dim), 0.15 * std::pow(2.0, dim)) << "dim " << dim;
  }
}

TEST(BallMesh, AdjacencyMatchesFaces) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.1);
  std::size_t incidences = 0;
  for (std::size_t i = 0; i < m.num_cells(); ++i) {
    for (std::size_t f : m.cell_faces(i)) {
      const Face& face = m.face(f);
      EXPECT_TRUE(face.owner == i || face.neighbor == i);
    }
    incidences += m.cell_faces(i).size();
  }
  EXPECT_EQ(incidences, 2 * m.num_faces());
}
