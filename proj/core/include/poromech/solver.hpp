#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace poromech {

/// y = Op(x).
using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GmresOptions {
  double rtol = 1e-6;
  int maxit = 500;
  /// Arnoldi breakdown threshold on the new Hessenberg subdiagonal,
  /// relative to the norm of the unorthogonalized vector.
  double breakdown_tol = 1e-14;
};

struct KrylovReport {
  int iterations = 0;
  /// ||r_k|| / ||b|| for k = 0 .. iterations.
  std::vector<double> residuals;
  bool converged = false;
};

/// Right-preconditioned GMRES without restarts from a zero initial guess:
/// modified Gram-Schmidt with one reorthogonalization pass and Givens
/// rotations. Returns on ||b - Ax|| <= rtol ||b|| or after maxit
/// iterations (report.converged tells which). Throws
/// Error(numerical_breakdown) on a breakdown with a non-small residual.
Eigen::VectorXd gmres(const LinearOperator& A, const LinearOperator& P, const Eigen::VectorXd& b,
                      const GmresOptions& options, KrylovReport& report);

}  // namespace poromech
