#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "chemotaxis/chemical_solver.hpp"

using namespace chemotaxis;

namespace {

SolverOptions tight() {
  SolverOptions o;
  o.tol = 1e-12;
  return o;
}

Field bump(const Mesh& m, double amp, double width) {
  Field u(m);
  for (std::size_t i = 0; i < m.num_cells(); ++i) {
    const auto& x = m.cell(i).center;
    u[i] = amp * std::exp(-width * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  }
  return u;
}

}  // namespace

TEST(Elliptic, ConstantProduction) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.1);
  const auto z = solve_elliptic_chemical(Field(m, 1.0), [](double) { return 3.5; }, m, tight());
  for (std::size_t i = 0; i < z.field.size(); ++i) EXPECT_NEAR(z.field[i], 3.5, 1e-10);
}

TEST(Elliptic, ZeroDensity) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.1);
  const auto z = solve_elliptic_chemical(Field(m, 0.0), power_law(1.5), m);
  for (std::size_t i = 0; i < z.field.size(); ++i) EXPECT_EQ(z.field[i], 0.0);
}

TEST(Elliptic, SingleCell) {
  const Mesh m(1, {Cell{{0, 0, 0}, 0.7}}, {}, {0.7, 1, 1});
  const auto z = solve_elliptic_chemical(Field(m, 5.0), power_law(1.0), m);
  EXPECT_NEAR(z.field[0], 5.0, 1e-12);
}

TEST(Elliptic, NonnegativeAndMonotone) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.06);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Field a(m), b(m);
    for (std::size_t i = 0; i < m.num_cells(); ++i) {
      a[i] = 10.0 * d(rng) * d(rng);
      b[i] = a[i] + d(rng);
    }
    const auto za = solve_elliptic_chemical(a, power_law(1.3), m, tight());
    const auto zb = solve_elliptic_chemical(b, power_law(1.3), m, tight());
    EXPECT_GE(za.field.min(), -1e-12);
    for (std::size_t i = 0; i < m.num_cells(); ++i) EXPECT_GE(zb.field[i] - za.field[i], -1e-9);
  }
}

TEST(Parabolic, DecayOfConstants) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.1);
  const double dt = 0.3;
  const auto z = step_parabolic_chemical(Field(m, 2.0), Field(m, 0.0), [](double) { return 0.0; }, m, dt, tight());
  for (std::size_t i = 0; i < z.field.size(); ++i) EXPECT_NEAR(z.field[i], 2.0 / (1.0 + dt), 1e-10);
}

TEST(Parabolic, StationaryInput) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.1);
  const auto z = step_parabolic_chemical(Field(m, 1.7), Field(m, 1.7), power_law(1.0), m, 1e-3, tight());
  for (std::size_t i = 0; i < z.field.size(); ++i) EXPECT_NEAR(z.field[i], 1.7, 1e-10);
}

TEST(Parabolic, LargeStepRecoversElliptic) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.08);
  const Field u = bump(m, 20.0, 8.0);
  const auto e = solve_elliptic_chemical(u, power_law(1.0), m, tight());
  const auto p = step_parabolic_chemical(Field(m, 0.0), u, power_law(1.0), m, 1e6, tight());
  for (std::size_t i = 0; i < m.num_cells(); ++i) EXPECT_NEAR(p.field[i], e.field[i], 1e-4 * std::abs(e.field[i]) + 1e-12);
}

TEST(Parabolic, RejectsBadStep) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.1);
  EXPECT_THROW(step_parabolic_chemical(Field(m), Field(m), power_law(1.0), m, 0.0), std::invalid_argument);
}

TEST(Nonlocal, ConstantDensity) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.1);
  const auto z = solve_nonlocal_chemical(Field(m, 4.0), power_law(1.5), m);
  for (std::size_t i = 0; i < z.field.size(); ++i) EXPECT_NEAR(z.field[i], 0.0, 1e-12);
}

TEST(Nonlocal, ZeroMeanAndSignChange) {
  for (int dim : {2, 3}) {
    const Mesh m = build_ball_mesh(dim, 1.0, dim == 2 ? 0.05 : 0.12);
    const auto z = solve_nonlocal_chemical(bump(m, 50.0, 10.0), power_law(1.2), m);
    EXPECT_LT(std::abs(weighted_mean(z.field, m)), 1e-12);
    EXPECT_LT(z.field.min(), 0.0);
    EXPECT_GT(z.field.max(), 0.0);
  }
}

TEST(Nonlocal, FourCellPseudoinverse) {
  const Mesh m = build_box_mesh(1, std::vector<double>{1.0}, std::vector<std::size_t>{4});
  const Field u(m, {2.0, 0.0, 0.0, 2.0});
  const auto z = solve_nonlocal_chemical(u, power_law(1.0), m, tight());
  // Oracle: integrated Neumann Laplacian (unit coefficients) and the mean-free source times volume.
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(4, 4);
  for (const auto& f : m.faces()) {
    const double t = f.area / f.distance;
    const auto a = static_cast<Eigen::Index>(f.owner), b = static_cast<Eigen::Index>(f.neighbor);
    L(a, a) += t;
    L(b, b) += t;
    L(a, b) -= t;
    L(b, a) -= t;
  }
  Eigen::VectorXd s(4);
  s << 2.0, 0.0, 0.0, 2.0;
  s.array() -= s.mean();
  s *= 0.25;
  const Eigen::VectorXd oracle = L.completeOrthogonalDecomposition().pseudoInverse() * s;
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(z.field[static_cast<std::size_t>(i)], oracle(i), 1e-8);
}
