#pragma once

#include <Eigen/Dense>

#include "poromech/geometry.hpp"

namespace poromech {

enum class InnerProduct { mimetic, tpfa };

/// Hybrid mimetic operators of one cell; rows follow F_K.
struct LocalMimetic {
  Eigen::MatrixXd N;      ///< n_f x 2, rows n^T kappa
  Eigen::MatrixXd R;      ///< n_f x 2, rows |f| c^T
  Eigen::MatrixXd M;      ///< n_f x n_f inner product
  Eigen::VectorXd div;    ///< |f| / |K|
  double gamma = 0.0;     ///< stability scaling (0 for TPFA)
};

struct NR {
  Eigen::MatrixXd N;
  Eigen::MatrixXd R;
};

/// Throws Error(degenerate_cell) if either matrix is rank deficient.
NR build_nr(const CellGeometry& cell, const Mat2& kappa);

/// M = R kappa^-1 R^T / |K| + gamma (I - N (N^T N)^-1 N^T).
Eigen::MatrixXd build_mk(const CellGeometry& cell, const Mat2& kappa, double* gamma = nullptr);

/// Diagonal two-point variant; throws Error(tpfa_inapplicable) when
/// n . kappa c <= 0 on some face.
Eigen::MatrixXd build_mk_tpfa(const CellGeometry& cell, const Mat2& kappa);

Eigen::VectorXd local_div(const CellGeometry& cell);

LocalMimetic build_local_mimetic(const CellGeometry& cell, const Mat2& kappa,
                                 InnerProduct kind = InnerProduct::mimetic);

}  // namespace poromech
