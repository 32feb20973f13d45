#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <gtest/gtest.h>

#include <poromech/assembly.hpp>
#include <poromech/error.hpp>
#include <poromech/mesh_generators.hpp>
#include <poromech/preconditioner.hpp>
#include <poromech/problems.hpp>

#include "oracles.hpp"

namespace poromech {
namespace {

using oracle::all_fixed;
using oracle::sparse_solve;

void expect_condensed_matches_dense(const Problem& problem, double dt, double t) {
  const oracle::CondensationComparison c = oracle::compare_condensed_with_dense(problem, dt, t);
  EXPECT_LT(c.dense_residual, 1e-12);
  EXPECT_LT(c.condensed_residual, 1e-12);
  EXPECT_LT(c.u, 1e-10);
  EXPECT_LT(c.p, 1e-10);
  EXPECT_LT(c.pi, 1e-10);
  EXPECT_LT(c.w, 1e-10);
}

TEST(Condensation, MatchesDenseSystemManufactured) {
  for (int n : {1, 2, 3}) expect_condensed_matches_dense(manufactured_problem(build_cartesian(n, n)), 0.1, 0.1);
  expect_condensed_matches_dense(manufactured_problem(apply_skew(build_cartesian(3, 3)), {}, true), 0.05, 0.05);
  expect_condensed_matches_dense(manufactured_problem(build_hybrid(3, 3), {}, true), 0.05, 0.05);
}

TEST(Condensation, MatchesDenseSystemMixedBoundaries) {
  MandelParams params;
  const MandelSetup setup = mandel_setup(build_cartesian(3, 3), params);
  expect_condensed_matches_dense(setup.problem, setup.dt, setup.dt);

  Problem cant = cantilever_problem(build_cartesian(3, 3), true);
  expect_condensed_matches_dense(cant, 1e-5, 1e-5);
}

TEST(Condensation, AdditionToPressureBlockIsDiagonal) {
  const PolyMesh mesh = build_cartesian(4, 4);
  const Problem p = manufactured_problem(mesh, {}, true);
  const auto geometry = compute_geometry(mesh);
  const MacroPartition part = build_macro_elements(mesh);
  const BlockSystem4 blocks = assemble_blocks(mesh, geometry, p.material, p.bc, p.loads, &part, 0.1, 0.1);
  const CondensedSystem cs = static_condense(blocks, 0.1);
  const Eigen::MatrixXd diff = Eigen::MatrixXd(cs.A_pp - blocks.Abar_pp);
  EXPECT_NEAR((diff - Eigen::MatrixXd(diff.diagonal().asDiagonal())).norm(), 0.0, 0.0);
  EXPECT_GT(diff.diagonal().minCoeff(), 0.0);
  EXPECT_EQ(build_cartesian(10, 10).condensed_unknowns(), 562);
  EXPECT_EQ(cs.size(), mesh.condensed_unknowns());
}

TEST(Blocks, SingleCellStorage) {
  const PolyMesh mesh = build_cartesian(1, 1);
  Material m;
  m.storage = 1.0;
  const BlockSystem4 s = assemble_blocks(mesh, compute_geometry(mesh), m, all_fixed(mesh), {}, nullptr, 1.0, 0.0);
  ASSERT_EQ(s.Abar_pp.rows(), 1);
  EXPECT_DOUBLE_EQ(Eigen::MatrixXd(s.Abar_pp)(0, 0), 1.0);
}

TEST(Blocks, LagrangeColumnsAndTranslation) {
  const PolyMesh mesh = build_cartesian(2, 2);
  const auto geometry = compute_geometry(mesh);
  const BlockSystem4 s = assemble_blocks(mesh, geometry, {}, all_fixed(mesh), {}, nullptr, 1.0, 0.0);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    int nnz = 0;
    for (SparseMatrix::InnerIterator it(s.A_wpi, f); it; ++it) {
      ++nnz;
      EXPECT_DOUBLE_EQ(it.value(), -0.5);
    }
    EXPECT_EQ(nnz, mesh.face(f).is_boundary() ? 1 : 2);
  }
  Eigen::VectorXd tx(s.n_u);
  for (int v = 0; v < mesh.num_vertices(); ++v) tx.segment<2>(2 * v) = Vec2(0.7, -0.2);
  EXPECT_NEAR((SparseMatrix(s.A_up.transpose()) * tx).norm(), 0.0, 1e-15);
}

TEST(Blocks, TractionFlagsMustBeOnBoundary) {
  const PolyMesh mesh = build_cartesian(2, 2);
  BoundaryConditions bc = all_fixed(mesh);
  bc.traction_faces.assign(mesh.num_faces(), false);
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (!mesh.face(f).is_boundary()) bc.traction_faces[f] = true;
  EXPECT_THROW(assemble_blocks(mesh, compute_geometry(mesh), {}, bc, {}, nullptr, 1.0, 0.0), Error);
  EXPECT_THROW(assemble_blocks(mesh, compute_geometry(mesh), {}, all_fixed(mesh), {}, nullptr, 0.0, 0.0), Error);
}

TEST(Elimination, IdentityRowsAndSymmetry) {
  const PolyMesh mesh = build_cartesian(4, 4);
  const BlockSystem4 s = assemble_blocks(mesh, compute_geometry(mesh), {}, all_fixed(mesh), {}, nullptr, 1.0, 0.0);
  std::vector<int> fixed;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.is_boundary_vertex(v)) fixed.insert(fixed.end(), {2 * v, 2 * v + 1});
  const EliminatedSystem el = apply_bcs(s.A_uu, fixed);
  const Eigen::MatrixXd A(el.matrix);
  EXPECT_NEAR((A - A.transpose()).norm(), 0.0, 1e-14 * A.norm());
  for (int d : fixed) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(A.rows());
    e(d) = 1.0;
    EXPECT_EQ(A.row(d).transpose(), e);
    EXPECT_EQ(A.col(d), e);
  }
  const Eigen::VectorXd b = el.apply(Eigen::VectorXd::Ones(A.rows()), Eigen::VectorXd::Zero(fixed.size()));
  for (int d : fixed) EXPECT_EQ(b(d), 0.0);

  EXPECT_THROW(apply_bcs(s.A_uu, {0, 0}), Error);
}

TEST(Elimination, ZeroPressureDataFixesPi) {
  PolyMesh mesh = build_cartesian(3, 3);
  mesh.tag_boundary([](const Vec2& x) { return x.x() > 1.0 - 1e-12; });
  BoundaryConditions bc = all_fixed(mesh);
  bc.pressure = [](const Vec2&, double) { return 0.0; };
  const auto dofs = dirichlet_dofs(mesh, bc);
  const auto values = dirichlet_values(mesh, bc, dofs, 0.0);
  int pi_dofs = 0;
  for (std::size_t i = 0; i < dofs.size(); ++i)
    if (dofs[i] >= mesh.num_vertices() * 2 + mesh.num_cells()) {
      ++pi_dofs;
      EXPECT_EQ(values(i), 0.0);
    }
  EXPECT_EQ(pi_dofs, 3);
}

TEST(Patch, VemReproducesLinearDisplacement) {
  std::mt19937_64 rng(31);
  for (auto family : {MeshFamily::cartesian, MeshFamily::skewed, MeshFamily::hybrid, MeshFamily::voronoi1,
                      MeshFamily::voronoi20})
    EXPECT_LT(oracle::vem_patch_error(build_family_mesh(family, 0), rng), 1e-10) << to_string(family);
}

using oracle::flux_error;
using oracle::solve_flow;
using oracle::FlowSolution;

TEST(Patch, MimeticReproducesLinearPressure) {
  Mat2 kappa;
  kappa << 2.0, 0.5, 0.5, 1.0;
  const Vec2 grad(0.8, -0.3);
  const auto p = [&](const Vec2& x) { return 1.0 + grad.dot(x); };
  for (auto family : {MeshFamily::cartesian, MeshFamily::skewed, MeshFamily::hybrid, MeshFamily::voronoi1,
                      MeshFamily::voronoi20}) {
    const PolyMesh mesh = build_family_mesh(family, 0);
    const FlowSolution sol = solve_flow(mesh, kappa, InnerProduct::mimetic, p);
    EXPECT_LT(flux_error(mesh, sol, -kappa * grad), 1e-10) << to_string(family);
    const auto geometry = compute_geometry(mesh);
    for (int k = 0; k < mesh.num_cells(); ++k) EXPECT_NEAR(sol.p(k), p(geometry[k].centroid), 1e-10);
  }
}

TEST(Patch, TpfaReproducesLinearPressureOnOrthogonalMesh) {
  Mat2 kappa;
  kappa << 3.0, 0.0, 0.0, 0.5;
  const Vec2 grad(-0.4, 1.1);
  const PolyMesh mesh = build_cartesian(7, 5);
  const FlowSolution sol = solve_flow(mesh, kappa, InnerProduct::tpfa, [&](const Vec2& x) { return grad.dot(x); });
  EXPECT_LT(flux_error(mesh, sol, -kappa * grad), 1e-10);
}

// The condensed flow operator after eliminating pi equals a cell-centred
// two-point stencil assembled from half transmissibilities.
TEST(Tpfa, CondensedFlowEqualsTwoPointStencil) {
  PolyMesh mesh = build_cartesian(5, 4, 1.0, 0.8);
  mesh.tag_boundary([](const Vec2& x) { return x.x() < 1e-12 || x.y() > 0.8 - 1e-12; });
  Mat2 kappa;
  kappa << 2.0, 0.0, 0.0, 0.7;
  const std::vector<bool> ok = check_k_orthogonality(mesh, kappa);
  ASSERT_TRUE(std::all_of(ok.begin(), ok.end(), [](bool b) { return b; }));
  EXPECT_LT(oracle::tpfa_stencil_error(mesh, kappa, 0.3, 0.25), 1e-12);
}

TEST(Sdc, DecoupledComponents) {
  const PolyMesh mesh = build_cartesian(3, 3);
  const BlockSystem4 s = assemble_blocks(mesh, compute_geometry(mesh), {}, all_fixed(mesh), {}, nullptr, 1.0, 0.0);
  const SparseMatrix sdc = build_sdc(s.A_uu);
  const Eigen::MatrixXd D(sdc);
  for (int i = 0; i < D.rows(); ++i)
    for (int j = 0; j < D.cols(); ++j)
      if (i % 2 != j % 2) EXPECT_EQ(D(i, j), 0.0);
  EXPECT_NEAR((Eigen::MatrixXd(build_sdc(sdc)) - D).norm(), 0.0, 0.0);
}

}  // namespace
}  // namespace poromech
