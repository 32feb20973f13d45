#include "poromech/preconditioner.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseCholesky>

#include "poromech/error.hpp"

namespace poromech {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix sparse_block(const SparseMatrix& A, int r0, int nr, int c0, int nc) {
  Triplets t;
  for (int col = c0; col < c0 + nc; ++col)
    for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      if (r >= r0 && r < r0 + nr) t.emplace_back(r - r0, col - c0, it.value());
    }
  SparseMatrix B(nr, nc);
  B.setFromTriplets(t.begin(), t.end());
  return B;
}

SparseMatrix build_sdc(const SparseMatrix& A_uu) {
  Triplets t;
  for (int col = 0; col < A_uu.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(A_uu, col); it; ++it)
      if (it.row() % 2 == it.col() % 2) t.emplace_back(it.row(), it.col(), it.value());
  SparseMatrix S(A_uu.rows(), A_uu.cols());
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

SparseMatrix build_bpp_tilde(const SparseMatrix& A_pp, const SparseMatrix& L_pu, const SparseMatrix& U_up,
                             const Eigen::VectorXd& D_uu) {
  for (Eigen::Index i = 0; i < D_uu.size(); ++i)
    if (D_uu(i) == 0.0) throw Error(ErrorKind::invalid_argument, "zero diagonal entry in A_uu");
  // diag(L D^-1 U)_k = sum_i L(k,i) U(i,k) / D_i.
  Eigen::VectorXd add = Eigen::VectorXd::Zero(A_pp.rows());
  const SparseMatrix Lt = L_pu.transpose();
  for (int k = 0; k < U_up.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(U_up, k); it; ++it) {
      const double l = Lt.coeff(it.row(), k);
      add(k) -= l * it.value() / D_uu(it.row());
    }
  }
  SparseMatrix B = A_pp;
  for (Eigen::Index k = 0; k < add.size(); ++k) B.coeffRef(k, k) += add(k);
  return B;
}

SparseMatrix build_bpp_tilde(const SparseMatrix& A_pp, const SparseMatrix& A_up, const Eigen::VectorXd& D_uu) {
  return build_bpp_tilde(A_pp, SparseMatrix(A_up.transpose()), SparseMatrix(-A_up), D_uu);
}

Eigen::VectorXd l1_diagonal(const SparseMatrix& B) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(B.rows());
  for (int col = 0; col < B.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(B, col); it; ++it)
      d(it.row()) += it.row() == it.col() ? it.value() : std::abs(it.value());
  return d;
}

SparseMatrix approximate_schur(const SparseMatrix& A_pipi, const SparseMatrix& L_pip, const SparseMatrix& U_ppi,
                               const Eigen::VectorXd& d) {
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d(i) != 0.0)) throw Error(ErrorKind::preconditioner_build, "zero l1-Jacobi diagonal entry");
  const SparseMatrix scaled = d.cwiseInverse().asDiagonal() * U_ppi;
  SparseMatrix C = A_pipi - L_pip * scaled;
  C.prune(0.0);
  return C;
}

SparseMatrix build_cpp_tilde(const SparseMatrix& A_pipi, const SparseMatrix& A_ppi, const Eigen::VectorXd& d,
                             double dt) {
  return approximate_schur(A_pipi, SparseMatrix(A_ppi.transpose()), SparseMatrix(dt * A_ppi), d);
}

struct SpdFactorization::Impl {
  Eigen::SimplicialLLT<SparseMatrix> llt;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool use_ldlt = false;
};

SpdFactorization::SpdFactorization(const SparseMatrix& A) : impl_(std::make_unique<Impl>()) {
  impl_->llt.compute(A);
  if (impl_->llt.info() == Eigen::Success) return;
  impl_->use_ldlt = true;
  impl_->ldlt.compute(A);
  if (impl_->ldlt.info() != Eigen::Success)
    throw Error(ErrorKind::preconditioner_build, "sparse Cholesky and LDL^T factorizations failed");
  const Eigen::VectorXd D = impl_->ldlt.vectorD();
  for (Eigen::Index i = 0; i < D.size(); ++i)
    if (!(std::abs(D(i)) > 0.0) || !std::isfinite(D(i)))
      throw Error(ErrorKind::preconditioner_build, "singular LDL^T pivot");
}

SpdFactorization::~SpdFactorization() = default;
SpdFactorization::SpdFactorization(SpdFactorization&&) noexcept = default;
SpdFactorization& SpdFactorization::operator=(SpdFactorization&&) noexcept = default;

Eigen::VectorXd SpdFactorization::solve(const Eigen::VectorXd& b) const {
  if (!impl_) throw Error(ErrorKind::internal, "solve on an empty factorization");
  return impl_->use_ldlt ? Eigen::VectorXd(impl_->ldlt.solve(b)) : Eigen::VectorXd(impl_->llt.solve(b));
}

bool SpdFactorization::used_ldlt() const noexcept { return impl_ && impl_->use_ldlt; }

void BlockTriangularPreconditioner::extract(const SparseMatrix& matrix) {
  if (matrix.rows() != n_u_ + n_p_ + n_pi_ || matrix.cols() != matrix.rows())
    throw Error(ErrorKind::invalid_argument, "matrix size does not match the block layout");
  U_up_ = sparse_block(matrix, 0, n_u_, n_u_, n_p_);
  U_ppi_ = sparse_block(matrix, n_u_, n_p_, n_u_ + n_p_, n_pi_);
}

BlockTriangularPreconditioner::BlockTriangularPreconditioner(const SparseMatrix& matrix, int n_u, int n_p, int n_pi)
    : n_u_(n_u), n_p_(n_p), n_pi_(n_pi) {
  extract(matrix);
  const SparseMatrix A_uu = sparse_block(matrix, 0, n_u, 0, n_u);
  const SparseMatrix A_pp = sparse_block(matrix, n_u, n_p, n_u, n_p);
  const SparseMatrix L_pu = sparse_block(matrix, n_u, n_p, 0, n_u);
  const SparseMatrix L_pip = sparse_block(matrix, n_u + n_p, n_pi, n_u, n_p);
  const SparseMatrix A_pipi = sparse_block(matrix, n_u + n_p, n_pi, n_u + n_p, n_pi);

  auu_tilde_ = build_sdc(A_uu);
  bpp_tilde_ = build_bpp_tilde(A_pp, L_pu, U_up_, Eigen::VectorXd(A_uu.diagonal()));
  l1_ = l1_diagonal(bpp_tilde_);
  for (Eigen::Index i = 0; i < l1_.size(); ++i)
    if (!(l1_(i) > 0.0))
      throw Error(ErrorKind::preconditioner_build, "non-positive l1-Jacobi diagonal at pressure dof " + std::to_string(i));
  cpipi_tilde_ = approximate_schur(A_pipi, L_pip, U_ppi_, l1_);

  fact_uu_ = std::make_shared<SpdFactorization>(auu_tilde_);
  fact_pipi_ = std::make_shared<SpdFactorization>(cpipi_tilde_);
  solve_uu_ = [f = fact_uu_](const Eigen::VectorXd& r) { return f->solve(r); };
  solve_pipi_ = [f = fact_pipi_](const Eigen::VectorXd& r) { return f->solve(r); };
  solve_pp_ = [d = l1_](const Eigen::VectorXd& r) { return Eigen::VectorXd(r.cwiseQuotient(d)); };
}

BlockTriangularPreconditioner::BlockTriangularPreconditioner(const SparseMatrix& matrix, int n_u, int n_p, int n_pi,
                                                             Solve uu, Solve pp, Solve pipi)
    : n_u_(n_u), n_p_(n_p), n_pi_(n_pi), solve_uu_(std::move(uu)), solve_pp_(std::move(pp)),
      solve_pipi_(std::move(pipi)) {
  extract(matrix);
}

Eigen::VectorXd BlockTriangularPreconditioner::apply(const Eigen::VectorXd& y) const {
  if (y.size() != n_u_ + n_p_ + n_pi_) throw Error(ErrorKind::invalid_argument, "preconditioner input has the wrong size");
  Eigen::VectorXd x(y.size());
  const Eigen::VectorXd z_pi = solve_pipi_(y.segment(n_u_ + n_p_, n_pi_));
  const Eigen::VectorXd z_p = solve_pp_(y.segment(n_u_, n_p_) - U_ppi_ * z_pi);
  x.segment(0, n_u_) = solve_uu_(y.segment(0, n_u_) - U_up_ * z_p);
  x.segment(n_u_, n_p_) = z_p;
  x.segment(n_u_ + n_p_, n_pi_) = z_pi;
  return x;
}

}  // namespace poromech
