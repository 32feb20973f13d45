#include "poromech/mfd.hpp"

#include <cmath>
#include <string>

#include "poromech/error.hpp"

namespace poromech {

namespace {

void check_kappa(const Mat2& kappa) {
  if (std::abs(kappa(0, 1) - kappa(1, 0)) > 1e-12 * kappa.norm() || !(kappa(0, 0) > 0.0) ||
      !(kappa.determinant() > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "permeability must be symmetric positive definite");
  }
}

bool full_rank(const Eigen::MatrixXd& A) {
  const Eigen::Matrix2d gram = A.transpose() * A;
  return gram.determinant() > 1e-14 * gram.trace() * gram.trace();
}

}  // namespace

NR build_nr(const CellGeometry& cell, const Mat2& kappa) {
  check_kappa(kappa);
  const int n = static_cast<int>(cell.faces.size());
  NR nr{Eigen::MatrixXd(n, 2), Eigen::MatrixXd(n, 2)};
  for (int i = 0; i < n; ++i) {
    const FaceGeometry& f = cell.faces[i];
    nr.N.row(i) = (kappa * f.normal).transpose();
    nr.R.row(i) = f.length * f.to_face.transpose();
  }
  if (!full_rank(nr.N) || !full_rank(nr.R)) throw Error(ErrorKind::degenerate_cell, "rank-deficient N or R");
  return nr;
}

Eigen::MatrixXd build_mk(const CellGeometry& cell, const Mat2& kappa, double* gamma) {
  const NR nr = build_nr(cell, kappa);
  const int n = static_cast<int>(cell.faces.size());
  const Eigen::MatrixXd consistency = nr.R * kappa.inverse() * nr.R.transpose() / cell.area;
  const double g = consistency.trace() / n;
  const Eigen::Matrix2d ntn = nr.N.transpose() * nr.N;
  const Eigen::MatrixXd proj = nr.N * ntn.inverse() * nr.N.transpose();
  if (gamma) *gamma = g;
  Eigen::MatrixXd M = consistency + g * (Eigen::MatrixXd::Identity(n, n) - proj);
  return 0.5 * (M + M.transpose());
}

Eigen::MatrixXd build_mk_tpfa(const CellGeometry& cell, const Mat2& kappa) {
  check_kappa(kappa);
  const int n = static_cast<int>(cell.faces.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const FaceGeometry& f = cell.faces[i];
    const double nkc = f.normal.dot(kappa * f.to_face);
    if (!(nkc > 0.0))
      throw Error(ErrorKind::tpfa_inapplicable, "n . kappa c = " + std::to_string(nkc) + " on local face " +
                                                    std::to_string(i));
    M(i, i) = f.length * f.to_face.squaredNorm() / nkc;
  }
  return M;
}

Eigen::VectorXd local_div(const CellGeometry& cell) {
  const int n = static_cast<int>(cell.faces.size());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = cell.faces[i].length / cell.area;
  return d;
}

LocalMimetic build_local_mimetic(const CellGeometry& cell, const Mat2& kappa, InnerProduct kind) {
  LocalMimetic lm;
  NR nr = build_nr(cell, kappa);
  lm.N = std::move(nr.N);
  lm.R = std::move(nr.R);
  if (kind == InnerProduct::mimetic) lm.M = build_mk(cell, kappa, &lm.gamma);
  else lm.M = build_mk_tpfa(cell, kappa);
  lm.div = local_div(cell);
  return lm;
}

}  // namespace poromech
