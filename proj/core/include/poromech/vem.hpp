#pragma once

#include <array>

#include <Eigen/Dense>

#include "poromech/geometry.hpp"

namespace poromech {

/// Lowest-order virtual element operators on one cell. Displacement dofs
/// are interleaved per vertex: (u_x, u_y) of vertex 0, then vertex 1, ...
struct LocalVem {
  int n_v = 0;
  /// 3 x n_v: vertex values -> coefficients of Pi^nabla in (1, m2, m3).
  Eigen::MatrixXd projector;
  /// 1 x n_v cell-mean row.
  Eigen::RowVectorXd mean_row;
  /// 2 x n_v mean gradient, rows (d/dx, d/dy).
  Eigen::MatrixXd mean_gradient;
  /// 3 x 2n_v mean strain in Voigt order (xx, yy, 2xy).
  Eigen::MatrixXd strain;
  /// 1 x 2n_v discrete divergence.
  Eigen::RowVectorXd divergence;
  /// 2n_v x 2n_v consistency + stability stiffness.
  Eigen::MatrixXd stiffness;
};

/// Scaled monomial m_j (j = 0, 1, 2) of the cell at x.
double scaled_monomial(const CellGeometry& cell, int j, const Vec2& x);

/// P^nabla (3 x n_v). Throws Error(degenerate_cell) for a singular system.
Eigen::MatrixXd pi_nabla(const CellGeometry& cell);

struct MeanOperators {
  Eigen::RowVectorXd mean;   ///< 1 x n_v
  Eigen::MatrixXd gradient;  ///< 2 x n_v
};
MeanOperators mean_operators(const CellGeometry& cell, const Eigen::MatrixXd& projector);

/// Plane-strain isotropic law in Voigt form (engineering shear strain).
Eigen::Matrix3d elasticity_voigt(double G, double lambda);

Eigen::MatrixXd local_stiffness(const CellGeometry& cell, double G, double lambda);
Eigen::RowVectorXd local_divergence(const CellGeometry& cell);

LocalVem build_local_vem(const CellGeometry& cell, double G, double lambda);

/// |K| * b * mean_row, interleaved (2n_v).
Eigen::VectorXd body_force_rhs(const CellGeometry& cell, const Vec2& b_mean);

/// Load on each endpoint of a boundary face under constant traction.
std::array<Vec2, 2> traction_rhs(double face_length, const Vec2& traction);

}  // namespace poromech
