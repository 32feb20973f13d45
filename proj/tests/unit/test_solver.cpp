#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <poromech/error.hpp>
#include <poromech/mesh_generators.hpp>
#include <poromech/preconditioner.hpp>
#include <poromech/problems.hpp>
#include <poromech/solver.hpp>

namespace poromech {
namespace {

LinearOperator dense_op(const Eigen::MatrixXd& A) {
  return [A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
}
LinearOperator sparse_op(const SparseMatrix& A) {
  return [&A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
}
const LinearOperator identity = [](const Eigen::VectorXd& x) { return x; };

TEST(Gmres, IdentityConvergesInOneIteration) {
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(7, -1.0, 2.0);
  KrylovReport report;
  const Eigen::VectorXd x = gmres(identity, identity, b, {}, report);
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(report.iterations, 1);
  EXPECT_NEAR((x - b).norm(), 0.0, 1e-14);
}

TEST(Gmres, ExactPreconditionerConvergesInOneIteration) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd R(10, 10);
  for (int i = 0; i < 100; ++i) R(i / 10, i % 10) = n01(rng);
  const Eigen::MatrixXd A = R * R.transpose() + 10.0 * Eigen::MatrixXd::Identity(10, 10);
  const Eigen::MatrixXd Ainv = A.inverse();
  Eigen::VectorXd b(10);
  for (int i = 0; i < 10; ++i) b(i) = n01(rng);
  KrylovReport report;
  const Eigen::VectorXd x = gmres(dense_op(A), dense_op(Ainv), b, {}, report);
  EXPECT_EQ(report.iterations, 1);
  EXPECT_LT((A * x - b).norm(), 1e-10 * b.norm());
}

TEST(Gmres, NonsymmetricSystemAndMonotoneResiduals) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n01;
  const int n = 60;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) * 4.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) += 0.3 * n01(rng) / std::sqrt(n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = n01(rng);
  GmresOptions opts;
  opts.rtol = 1e-10;
  KrylovReport report;
  const Eigen::VectorXd x = gmres(dense_op(A), identity, b, opts, report);
  ASSERT_TRUE(report.converged);
  EXPECT_LE((b - A * x).norm(), 1.01e-10 * b.norm());
  ASSERT_EQ(static_cast<int>(report.residuals.size()), report.iterations + 1);
  EXPECT_DOUBLE_EQ(report.residuals.front(), 1.0);
  for (std::size_t k = 1; k < report.residuals.size(); ++k)
    EXPECT_LE(report.residuals[k], report.residuals[k - 1] * (1.0 + 1e-12));
}

TEST(Gmres, HappyBreakdownIsConvergence) {
  // Two distinct eigenvalues: the Krylov space is exhausted after two steps.
  Eigen::VectorXd d(6);
  d << 1, 1, 1, 3, 3, 3;
  const Eigen::MatrixXd A = d.asDiagonal();
  KrylovReport report;
  const Eigen::VectorXd x = gmres(dense_op(A), identity, Eigen::VectorXd::Ones(6), {}, report);
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(report.iterations, 2);
  EXPECT_NEAR((A * x - Eigen::VectorXd::Ones(6)).norm(), 0.0, 1e-12);
}

TEST(Gmres, SingularOperatorBreaksDown) {
  const LinearOperator zero = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()); };
  KrylovReport report;
  try {
    gmres(zero, identity, Eigen::VectorXd::Ones(4), {}, report);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical_breakdown);
  }
}

TEST(Gmres, IterationCapReportsNonConvergence) {
  const int n = 50;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, (i + 1) % n) = 1.0;  // cyclic shift: no progress until step n
  GmresOptions opts;
  opts.maxit = 10;
  KrylovReport report;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;
  gmres(dense_op(A), identity, b, opts, report);
  EXPECT_FALSE(report.converged);
  EXPECT_EQ(report.iterations, 10);
}

TEST(Gmres, ZeroRightHandSide) {
  KrylovReport report;
  const Eigen::VectorXd x = gmres(identity, identity, Eigen::VectorXd::Zero(5), {}, report);
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(x.norm(), 0.0);
}

// Textbook right-preconditioned GMRES: classical Gram-Schmidt applied twice
// and a fresh least-squares solve of the Hessenberg system each step.
int reference_gmres_iterations(const LinearOperator& A, const LinearOperator& P, const Eigen::VectorXd& b,
                               double rtol, int maxit) {
  const double beta = b.norm();
  std::vector<Eigen::VectorXd> V{b / beta};
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(maxit + 1, maxit);
  for (int k = 0; k < maxit; ++k) {
    Eigen::VectorXd w = A(P(V[k]));
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= k; ++j) {
        const double h = V[j].dot(w);
        H(j, k) += h;
        w -= h * V[j];
      }
    H(k + 1, k) = w.norm();
    V.push_back(w / H(k + 1, k));
    const Eigen::MatrixXd Hk = H.topLeftCorner(k + 2, k + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 2);
    rhs(0) = beta;
    const Eigen::VectorXd y = Hk.colPivHouseholderQr().solve(rhs);
    if ((rhs - Hk * y).norm() <= rtol * beta) return k + 1;
  }
  return maxit;
}

struct CantileverSystem {
  Problem problem;
  std::unique_ptr<Simulator> sim;
};

CantileverSystem cantilever_system(int level, double dt, bool stabilized) {
  CantileverSystem c{cantilever_problem(build_family_mesh(MeshFamily::cartesian, level), stabilized), nullptr};
  c.sim = std::make_unique<Simulator>(c.problem, dt);
  return c;
}

TEST(Gmres, MatchesReferenceOnCantilever) {
  CantileverSystem c = cantilever_system(0, 1e-5, true);
  const SparseMatrix& A = c.sim->eliminated().matrix;
  const BlockTriangularPreconditioner& P = c.sim->preconditioner();
  const Eigen::VectorXd b = c.sim->step_rhs(c.sim->zero_state());
  const LinearOperator Pop = [&P](const Eigen::VectorXd& y) { return P.apply(y); };

  KrylovReport report;
  GmresOptions opts;
  const Eigen::VectorXd x = gmres(sparse_op(A), Pop, b, opts, report);
  ASSERT_TRUE(report.converged);
  EXPECT_LE((b - A * x).norm(), 1.0001 * opts.rtol * b.norm());
  const int ref = reference_gmres_iterations(sparse_op(A), Pop, b, opts.rtol, 200);
  EXPECT_NEAR(report.iterations, ref, 1);
}

TEST(Preconditioner, ZeroInZeroOut) {
  CantileverSystem c = cantilever_system(0, 1e-5, true);
  const auto& P = c.sim->preconditioner();
  EXPECT_EQ(P.apply(Eigen::VectorXd::Zero(c.sim->condensed().size())).norm(), 0.0);
  EXPECT_THROW(P.apply(Eigen::VectorXd::Zero(3)), Error);
}

// Dense oracle: assemble the upper block-triangular matrix explicitly and
// solve with it.
TEST(Preconditioner, FactoredApplicationMatchesDenseTriangle) {
  for (bool stabilized : {false, true}) {
    CantileverSystem c = cantilever_system(0, 1e-5, stabilized);
    const CondensedSystem& cs = c.sim->condensed();
    const auto& P = c.sim->preconditioner();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(cs.size(), cs.size());
    T.block(0, 0, cs.n_u, cs.n_u) = Eigen::MatrixXd(P.auu_tilde());
    T.block(0, cs.n_u, cs.n_u, cs.n_p) = Eigen::MatrixXd(P.U_up());
    T.block(cs.n_u, cs.n_u, cs.n_p, cs.n_p) = Eigen::MatrixXd(P.l1().asDiagonal());
    T.block(cs.n_u, cs.n_u + cs.n_p, cs.n_p, cs.n_pi) = Eigen::MatrixXd(P.U_ppi());
    T.block(cs.n_u + cs.n_p, cs.n_u + cs.n_p, cs.n_pi, cs.n_pi) = Eigen::MatrixXd(P.cpipi_tilde());
    const auto lu = T.partialPivLu();
    std::mt19937_64 rng(43);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd y(cs.size());
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = n01(rng);
      const Eigen::VectorXd z = P.apply(y);
      const Eigen::VectorXd ref = lu.solve(y);
      EXPECT_LT((z - ref).norm(), 1e-12 * ref.norm());
    }
  }
}

// With exact Schur complements as diagonal blocks, A P^-1 - I is strictly
// block lower triangular, so GMRES needs at most three iterations.
TEST(Preconditioner, ExactBlocksConvergeInThreeIterations) {
  for (int n : {1, 2}) {
    Problem prob = cantilever_problem(build_cartesian(n, n), false);
    prob.material.storage = 1e-3;
    Simulator sim(prob, 1e-2);
    const CondensedSystem& cs = sim.condensed();
    const Eigen::MatrixXd A(sim.eliminated().matrix);
    const int nu = cs.n_u, np = cs.n_p, npi = cs.n_pi;
    const Eigen::MatrixXd A11 = A.block(0, 0, nu, nu), A12 = A.block(0, nu, nu, np);
    const Eigen::MatrixXd A21 = A.block(nu, 0, np, nu), A22 = A.block(nu, nu, np, np);
    const Eigen::MatrixXd A23 = A.block(nu, nu + np, np, npi), A32 = A.block(nu + np, nu, npi, np);
    const Eigen::MatrixXd A33 = A.block(nu + np, nu + np, npi, npi);
    const Eigen::MatrixXd S2 = A22 - A21 * A11.inverse() * A12;
    const Eigen::MatrixXd S3 = A33 - A32 * S2.inverse() * A23;
    const auto inv = [](Eigen::MatrixXd M) {
      return [Mi = Eigen::MatrixXd(M.inverse())](const Eigen::VectorXd& r) -> Eigen::VectorXd { return Mi * r; };
    };
    const BlockTriangularPreconditioner P(sim.eliminated().matrix, nu, np, npi, inv(A11), inv(S2), inv(S3));
    std::mt19937_64 rng(44);
    std::normal_distribution<double> n01;
    Eigen::VectorXd b(cs.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = n01(rng);
    GmresOptions opts;
    opts.rtol = 1e-10;
    KrylovReport report;
    gmres(dense_op(A), [&P](const Eigen::VectorXd& y) { return P.apply(y); }, b, opts, report);
    EXPECT_TRUE(report.converged);
    EXPECT_LE(report.iterations, 3) << n << "x" << n;
  }
}

TEST(Preconditioner, SdcDecouplingGrowsWithLambda) {
  const PolyMesh mesh = build_cartesian(6, 6);
  const auto gap = [&](double lambda) {
    Problem p = cantilever_problem(mesh, false);
    p.material.G = 1.0;
    p.material.lambda = lambda;
    const auto geometry = compute_geometry(mesh);
    const BlockSystem4 s = assemble_blocks(mesh, geometry, p.material, p.bc, p.loads, nullptr, 1.0, 0.0);
    return (Eigen::MatrixXd(s.A_uu) - Eigen::MatrixXd(build_sdc(s.A_uu))).norm() / Eigen::MatrixXd(s.A_uu).norm();
  };
  EXPECT_LT(gap(0.0), gap(1e5));
}

TEST(Preconditioner, FixedStressBlock) {
  SparseMatrix App(3, 3);
  App.insert(0, 0) = 2.0;
  App.insert(1, 1) = 3.0;
  App.insert(2, 2) = 4.0;
  const SparseMatrix zero(5, 3);
  EXPECT_EQ((Eigen::MatrixXd(build_bpp_tilde(App, zero, Eigen::VectorXd::Ones(5))) - Eigen::MatrixXd(App)).norm(), 0.0);
  const Eigen::VectorXd l1 = l1_diagonal(App);
  EXPECT_EQ(l1, Eigen::Vector3d(2, 3, 4));

  SparseMatrix B(2, 2);
  B.insert(0, 0) = 2.0;
  B.insert(0, 1) = -1.0;
  B.insert(1, 0) = -0.5;
  B.insert(1, 1) = 1.0;
  EXPECT_EQ(l1_diagonal(B), Eigen::Vector2d(3.0, 1.5));

  CantileverSystem c = cantilever_system(0, 1e-5, true);
  const auto& P = c.sim->preconditioner();
  EXPECT_GT(Eigen::VectorXd(P.bpp_tilde().diagonal()).minCoeff(), 0.0);
}

TEST(Preconditioner, SchurApproximation) {
  CantileverSystem c = cantilever_system(0, 1e-5, true);
  const CondensedSystem& cs = c.sim->condensed();
  const Eigen::VectorXd d = Eigen::VectorXd::Ones(cs.n_p);
  EXPECT_NEAR((Eigen::MatrixXd(build_cpp_tilde(cs.A_pipi, cs.A_ppi, d, 0.0)) - Eigen::MatrixXd(cs.A_pipi)).norm(), 0.0,
              0.0);

  const Eigen::MatrixXd C(c.sim->preconditioner().cpipi_tilde());
  EXPECT_NEAR((C - C.transpose()).norm(), 0.0, 1e-12 * C.norm());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(C).eigenvalues().minCoeff(), 0.0);

  Problem one = cantilever_problem(build_cartesian(1, 1), false);
  one.bc.fixed_displacement.assign(4, {true, true});
  Simulator sim(one, 1e-5);
  const Eigen::MatrixXd C1(sim.preconditioner().cpipi_tilde());
  ASSERT_EQ(C1.rows(), 4);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(C1).eigenvalues().minCoeff(), 0.0);
}

TEST(SpdFactorizationTest, SolvesAndRejectsSingular) {
  SparseMatrix A(3, 3);
  A.insert(0, 0) = 4;
  A.insert(1, 1) = 5;
  A.insert(2, 2) = 6;
  A.insert(0, 1) = A.insert(1, 0) = 1;
  const SpdFactorization f(A);
  const Eigen::Vector3d b(1, 2, 3);
  EXPECT_NEAR((A * f.solve(b) - b).norm(), 0.0, 1e-14);
  EXPECT_FALSE(f.used_ldlt());

  SparseMatrix S(2, 2);
  S.insert(0, 0) = 1;
  S.insert(0, 1) = S.insert(1, 0) = 1;
  S.insert(1, 1) = 1;
  EXPECT_THROW(SpdFactorization{S}, Error);
}

}  // namespace
}  // namespace poromech
