#pragma once

#include <functional>
#include <memory>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace poromech {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Keeps only x-x and y-y couplings of an interleaved displacement matrix.
SparseMatrix build_sdc(const SparseMatrix& A_uu);

/// A_pp - diag(L_pu diag(A_uu)^-1 U_up), with L_pu and U_up the (p,u)
/// and (u,p) blocks as they appear in the system matrix.
SparseMatrix build_bpp_tilde(const SparseMatrix& A_pp, const SparseMatrix& L_pu, const SparseMatrix& U_up,
                             const Eigen::VectorXd& D_uu);

/// Same for the condensed sign convention (U_up = -A_up, L_pu = A_up^T).
SparseMatrix build_bpp_tilde(const SparseMatrix& A_pp, const SparseMatrix& A_up, const Eigen::VectorXd& D_uu);

/// l1-Jacobi diagonal: b_ii + sum_{j != i} |b_ij|.
Eigen::VectorXd l1_diagonal(const SparseMatrix& B);

/// A_pipi - L_pip diag(d)^-1 U_ppi.
SparseMatrix approximate_schur(const SparseMatrix& A_pipi, const SparseMatrix& L_pip, const SparseMatrix& U_ppi,
                               const Eigen::VectorXd& d);

/// A_pipi - dt A_ppi^T diag(d)^-1 A_ppi.
SparseMatrix build_cpp_tilde(const SparseMatrix& A_pipi, const SparseMatrix& A_ppi, const Eigen::VectorXd& d,
                             double dt);

/// Sparse SPD factorization: Cholesky, falling back to LDL^T. Throws
/// Error(preconditioner_build) if both fail.
class SpdFactorization {
 public:
  SpdFactorization() = default;
  explicit SpdFactorization(const SparseMatrix& A);
  ~SpdFactorization();
  SpdFactorization(SpdFactorization&&) noexcept;
  SpdFactorization& operator=(SpdFactorization&&) noexcept;

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  bool used_ldlt() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Inverse of the block upper-triangular matrix
///
///     [ Auu  U_up  0     ]
///     [ 0    Bpp   U_ppi ]
///     [ 0    0     Cpipi ]
///
/// applied right to left: pi <- Cpipi^-1 y_pi, p <- Bpp^-1 (y_p - U_ppi pi),
/// u <- Auu^-1 (y_u - U_up p).
class BlockTriangularPreconditioner {
 public:
  using Solve = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  /// Fixed-stress build from the (eliminated) condensed matrix: Auu by the
  /// separate-displacement-component block, Bpp by one l1-Jacobi sweep on
  /// the fixed-stress approximation, Cpipi by the factorized sparse Schur
  /// approximation.
  BlockTriangularPreconditioner(const SparseMatrix& matrix, int n_u, int n_p, int n_pi);

  /// Custom diagonal-block solves; coupling blocks are taken from `matrix`.
  BlockTriangularPreconditioner(const SparseMatrix& matrix, int n_u, int n_p, int n_pi, Solve uu, Solve pp,
                                Solve pipi);

  Eigen::VectorXd apply(const Eigen::VectorXd& y) const;

  const SparseMatrix& auu_tilde() const noexcept { return auu_tilde_; }
  const SparseMatrix& bpp_tilde() const noexcept { return bpp_tilde_; }
  const Eigen::VectorXd& l1() const noexcept { return l1_; }
  const SparseMatrix& cpipi_tilde() const noexcept { return cpipi_tilde_; }
  const SparseMatrix& U_up() const noexcept { return U_up_; }
  const SparseMatrix& U_ppi() const noexcept { return U_ppi_; }

 private:
  void extract(const SparseMatrix& matrix);

  int n_u_, n_p_, n_pi_;
  SparseMatrix U_up_, U_ppi_;
  SparseMatrix auu_tilde_, bpp_tilde_, cpipi_tilde_;
  Eigen::VectorXd l1_;
  Solve solve_uu_, solve_pp_, solve_pipi_;
  std::shared_ptr<SpdFactorization> fact_uu_, fact_pipi_;
};

/// Rows [r0, r0+nr) and columns [c0, c0+nc) of a sparse matrix.
SparseMatrix sparse_block(const SparseMatrix& A, int r0, int nr, int c0, int nc);

}  // namespace poromech
