#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <poromech/error.hpp>
#include <poromech/geometry.hpp>
#include <poromech/vem.hpp>

#include "test_support.hpp"

namespace poromech {
namespace {

using testing::random_convex_polygon;

Eigen::VectorXd sample(const CellGeometry& g, const std::function<double(const Vec2&)>& f) {
  Eigen::VectorXd v(g.vertices.size());
  for (std::size_t i = 0; i < g.vertices.size(); ++i) v(i) = f(g.vertices[i]);
  return v;
}

Eigen::VectorXd sample_vector(const CellGeometry& g, const std::function<Vec2(const Vec2&)>& f) {
  Eigen::VectorXd v(2 * g.vertices.size());
  for (std::size_t i = 0; i < g.vertices.size(); ++i) v.segment<2>(2 * i) = f(g.vertices[i]);
  return v;
}

// Mean gradient of the edge-linear trace by the divergence theorem,
// evaluated edge by edge without touching the library operators.
Vec2 boundary_mean_gradient(const CellGeometry& g, const Eigen::VectorXd& eta) {
  const int n = static_cast<int>(g.vertices.size());
  Vec2 s = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec2 t = g.vertices[(i + 1) % n] - g.vertices[i];
    const Vec2 normal_times_length(t.y(), -t.x());
    s += 0.5 * (eta(i) + eta((i + 1) % n)) * normal_times_length;
  }
  return s / g.area;
}

TEST(PiNabla, ConstantOnUnitSquare) {
  const CellGeometry g = polygon_geometry(testing::unit_square());
  const Eigen::Vector3d c = pi_nabla(g) * Eigen::Vector4d::Ones();
  EXPECT_NEAR((c - Eigen::Vector3d(1, 0, 0)).norm(), 0.0, 1e-14);
}

TEST(PiNabla, XRampOnUnitSquare) {
  const CellGeometry g = polygon_geometry(testing::unit_square());
  const Eigen::Vector3d c = pi_nabla(g) * Eigen::Vector4d(0, 1, 1, 0);
  // x = 0.5 + h m2 with h = sqrt(2).
  EXPECT_NEAR(c(0), 0.5, 1e-14);
  EXPECT_NEAR(c(1), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(c(2), 0.0, 1e-14);
}

TEST(PiNabla, ReproducesLinearsOnRandomPolygons) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const CellGeometry g = polygon_geometry(random_convex_polygon(rng, 3 + trial % 8));
    const double a = coef(rng), bx = coef(rng), by = coef(rng);
    const auto lin = [&](const Vec2& x) { return a + bx * x.x() + by * x.y(); };
    const Eigen::Vector3d c = pi_nabla(g) * sample(g, lin);
    for (const Vec2& x : g.vertices) {
      const double value = c(0) + c(1) * scaled_monomial(g, 1, x) + c(2) * scaled_monomial(g, 2, x);
      EXPECT_NEAR(value, lin(x), 1e-12);
    }
  }
}

TEST(PiNabla, SlopeMatchesBoundaryIntegralOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const CellGeometry g = polygon_geometry(random_convex_polygon(rng, 4 + trial % 6));
    Eigen::VectorXd eta(g.vertices.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) eta(i) = val(rng);
    const Eigen::Vector3d c = pi_nabla(g) * eta;
    const Vec2 oracle = boundary_mean_gradient(g, eta);
    EXPECT_NEAR(c(1) / g.diameter, oracle.x(), 1e-12);
    EXPECT_NEAR(c(2) / g.diameter, oracle.y(), 1e-12);
  }
}

TEST(PiNabla, SliverIsDegenerate) {
  const CellGeometry g = polygon_geometry({{0, 0}, {1, 0}, {0.5, 1e-15}});
  EXPECT_THROW(pi_nabla(g), Error);
}

TEST(MeanOperators, SquareExamples) {
  const CellGeometry g = polygon_geometry(testing::unit_square());
  const MeanOperators ops = mean_operators(g, pi_nabla(g));
  const Eigen::Vector4d x(0, 1, 1, 0);
  EXPECT_NEAR(ops.mean.dot(x), 0.5, 1e-14);
  EXPECT_NEAR((ops.gradient * x - Eigen::Vector2d(1, 0)).norm(), 0.0, 1e-14);
  const Eigen::Vector4d c = Eigen::Vector4d::Constant(3.5);
  EXPECT_NEAR(ops.mean.dot(c), 3.5, 1e-14);
  EXPECT_NEAR((ops.gradient * c).norm(), 0.0, 1e-14);
}

TEST(Stiffness, RigidBodyKernelAndPositivity) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const CellGeometry g = polygon_geometry(random_convex_polygon(rng, 3 + trial % 8));
    const Eigen::MatrixXd K = local_stiffness(g, 1.3, 0.7);
    EXPECT_NEAR((K - K.transpose()).norm(), 0.0, 1e-12 * K.norm());

    const Vec2 xk = g.centroid;
    const Eigen::VectorXd tx = sample_vector(g, [](const Vec2&) { return Vec2(1, 0); });
    const Eigen::VectorXd ty = sample_vector(g, [](const Vec2&) { return Vec2(0, 1); });
    const Eigen::VectorXd rot = sample_vector(g, [&](const Vec2& x) { return Vec2(-(x.y() - xk.y()), x.x() - xk.x()); });
    for (const Eigen::VectorXd* r : {&tx, &ty, &rot}) EXPECT_NEAR((K * *r).norm(), 0.0, 1e-11 * K.norm());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
    const Eigen::VectorXd ev = eig.eigenvalues();
    const double top = ev.maxCoeff();
    EXPECT_GT(ev(0), -1e-12 * top);
    EXPECT_LT(std::abs(ev(2)), 1e-11 * top);
    EXPECT_GT(ev(3), 1e-8 * top) << "kernel larger than the rigid-body modes";
  }
}

TEST(Stiffness, ConsistentOnLinearFields) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  const double G = 2.0, lambda = 5.0;
  const Eigen::Matrix3d C = elasticity_voigt(G, lambda);
  for (int trial = 0; trial < 200; ++trial) {
    const CellGeometry g = polygon_geometry(random_convex_polygon(rng, 3 + trial % 8));
    Mat2 Gu, Gv;
    Gu << c(rng), c(rng), c(rng), c(rng);
    Gv << c(rng), c(rng), c(rng), c(rng);
    const Eigen::VectorXd u = sample_vector(g, [&](const Vec2& x) -> Vec2 { return Gu * x; });
    const Eigen::VectorXd v = sample_vector(g, [&](const Vec2& x) -> Vec2 { return Gv * x; });
    const Eigen::Vector3d eu(Gu(0, 0), Gu(1, 1), Gu(0, 1) + Gu(1, 0));
    const Eigen::Vector3d ev(Gv(0, 0), Gv(1, 1), Gv(0, 1) + Gv(1, 0));
    const double exact = g.area * ev.dot(C * eu);
    const double discrete = v.dot(local_stiffness(g, G, lambda) * u);
    EXPECT_NEAR(discrete, exact, 1e-12 * (1.0 + std::abs(exact)));
  }
}

TEST(Stiffness, HourglassEnergyIsStabilityOnly) {
  const CellGeometry g = polygon_geometry(testing::unit_square());
  const LocalVem v = build_local_vem(g, 1.0, 1.0);
  Eigen::VectorXd hg = Eigen::VectorXd::Zero(8);
  hg(0) = 1, hg(2) = -1, hg(4) = 1, hg(6) = -1;
  EXPECT_NEAR((v.strain * hg).norm(), 0.0, 1e-14);
  // (I - Pi) fixes the hourglass vector, so the energy is 2G |hg|^2 = 8.
  EXPECT_NEAR(hg.dot(v.stiffness * hg), 8.0, 1e-13);
}

TEST(Stiffness, RejectsBadMaterials) {
  const CellGeometry g = polygon_geometry(testing::unit_square());
  EXPECT_THROW(build_local_vem(g, 0.0, 1.0), Error);
  EXPECT_THROW(build_local_vem(g, 1.0, -1.0), Error);
}

TEST(Divergence, Examples) {
  const CellGeometry sq = polygon_geometry(testing::unit_square());
  const Eigen::RowVectorXd D = local_divergence(sq);
  EXPECT_NEAR(D.dot(sample_vector(sq, [](const Vec2& x) { return x; })), 2.0, 1e-14);
  EXPECT_NEAR(D.dot(sample_vector(sq, [](const Vec2&) { return Vec2(0.3, -2.0); })), 0.0, 1e-14);
  // Edge-linear trace of x^2: only the right edge (x = 1) and the left edge
  // (x = 0) carry flux, giving 1 * 1 - 0.
  EXPECT_NEAR(D.dot(sample_vector(sq, [](const Vec2& x) { return Vec2(x.x() * x.x(), 0.0); })), 1.0, 1e-14);

  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const CellGeometry g = polygon_geometry(random_convex_polygon(rng, 3 + trial % 8));
    EXPECT_NEAR(local_divergence(g).dot(sample_vector(g, [](const Vec2& x) { return x; })), 2.0, 1e-12);
  }
}

TEST(Loads, BodyForce) {
  const CellGeometry sq = polygon_geometry(testing::unit_square());
  const Eigen::VectorXd f = body_force_rhs(sq, {0.0, -1.0});
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(f(2 * i), 0.0, 1e-15);
    EXPECT_NEAR(f(2 * i + 1), -0.25, 1e-15);
  }
  EXPECT_NEAR(body_force_rhs(sq, Vec2::Zero()).norm(), 0.0, 0.0);

  const CellGeometry tri = polygon_geometry(testing::right_triangle());
  const Eigen::VectorXd ft = body_force_rhs(tri, {1.0, 0.0});
  const Eigen::RowVectorXd mean = pi_nabla(tri).row(0);
  EXPECT_NEAR(mean.sum(), 1.0, 1e-14);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(ft(2 * i), 0.5 * mean(i), 1e-15);
    EXPECT_NEAR(ft(2 * i + 1), 0.0, 1e-15);
  }
}

TEST(Loads, Traction) {
  auto unit = traction_rhs(1.0, {0.0, -1.0});
  EXPECT_EQ(unit[0], Vec2(0.0, -0.5));
  EXPECT_EQ(unit[1], Vec2(0.0, -0.5));
  auto zero = traction_rhs(1.0, Vec2::Zero());
  EXPECT_EQ(zero[0], Vec2::Zero());

  // Ten top faces of a 10x10 cantilever sum to the applied unit force.
  Vec2 total = Vec2::Zero();
  for (int f = 0; f < 10; ++f) {
    auto part = traction_rhs(0.1, {0.0, -1.0});
    EXPECT_NEAR(part[0].y(), -0.05, 1e-16);
    total += part[0] + part[1];
  }
  EXPECT_NEAR((total - Vec2(0, -1)).norm(), 0.0, 1e-14);
}

}  // namespace
}  // namespace poromech
