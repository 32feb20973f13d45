#include "poromech/solver.hpp"

#include <cmath>
#include <string>

#include "poromech/error.hpp"

namespace poromech {

Eigen::VectorXd gmres(const LinearOperator& A, const LinearOperator& P, const Eigen::VectorXd& b,
                      const GmresOptions& options, KrylovReport& report) {
  report = KrylovReport{};
  const Eigen::Index n = b.size();
  const double bnorm = b.norm();
  if (!std::isfinite(bnorm)) throw Error(ErrorKind::invalid_argument, "right-hand side is not finite");
  report.residuals.push_back(bnorm > 0.0 ? 1.0 : 0.0);
  if (bnorm == 0.0) {
    report.converged = true;
    return Eigen::VectorXd::Zero(n);
  }

  const int m = std::max(1, options.maxit);
  std::vector<Eigen::VectorXd> V;
  V.reserve(m + 1);
  V.push_back(b / bnorm);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs = Eigen::VectorXd::Zero(m), sn = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
  g(0) = bnorm;

  int k = 0;
  bool breakdown = false;
  while (k < m) {
    Eigen::VectorXd w = A(P(V[k]));
    const double wnorm = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= k; ++i) {
        const double hij = V[i].dot(w);
        H(i, k) += hij;
        w -= hij * V[i];
      }
    }
    const double hnext = w.norm();
    H(k + 1, k) = hnext;

    for (int i = 0; i < k; ++i) {
      const double t = cs(i) * H(i, k) + sn(i) * H(i + 1, k);
      H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
      H(i, k) = t;
    }
    const double r = std::hypot(H(k, k), H(k + 1, k));
    if (r == 0.0) throw Error(ErrorKind::numerical_breakdown, "singular Hessenberg column");
    cs(k) = H(k, k) / r;
    sn(k) = H(k + 1, k) / r;
    H(k, k) = r;
    H(k + 1, k) = 0.0;
    g(k + 1) = -sn(k) * g(k);
    g(k) = cs(k) * g(k);
    ++k;

    const double rel = std::abs(g(k)) / bnorm;
    report.residuals.push_back(rel);
    if (rel <= options.rtol) {
      report.converged = true;
      break;
    }
    if (hnext <= options.breakdown_tol * std::max(wnorm, 1e-300)) {
      breakdown = true;
      break;
    }
    V.push_back(w / hnext);
  }
  report.iterations = k;

  const Eigen::VectorXd y =
      H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < k; ++i) z += y(i) * V[i];
  if (breakdown && !report.converged)
    throw Error(ErrorKind::numerical_breakdown,
                "Arnoldi breakdown at iteration " + std::to_string(k) + " with relative residual " +
                    std::to_string(report.residuals.back()));
  return P(z);
}

}  // namespace poromech
