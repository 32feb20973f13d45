#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "poromech/geometry.hpp"
#include "poromech/mfd.hpp"
#include "poromech/stab.hpp"

namespace poromech {

using SparseMatrix = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(const Vec2&, double)>;
using VectorField = std::function<Vec2(const Vec2&, double)>;

struct Material {
  double G = 1.0;
  double lambda = 1.0;
  double alpha = 1.0;
  double storage = 0.0;  ///< constrained specific storage S_eps
  Mat2 kappa = Mat2::Identity();
  /// Optional per-cell permeability; overrides `kappa` when non-empty.
  std::vector<Mat2> cell_kappa;

  const Mat2& kappa_of(int cell) const { return cell_kappa.empty() ? kappa : cell_kappa[cell]; }
  /// Throws Error(invalid_argument) on out-of-range parameters.
  void validate(int num_cells) const;
};

struct BoundaryConditions {
  /// Per vertex and component: true where the displacement is prescribed.
  std::vector<std::array<bool, 2>> fixed_displacement;
  VectorField displacement;
  /// Per face: true for boundary faces carrying a traction.
  std::vector<bool> traction_faces;
  VectorField traction;
  /// Value on faces tagged FaceTag::pressure.
  ScalarField pressure;
  /// Outward normal flux on faces tagged FaceTag::flux.
  ScalarField flux;
};

struct Loads {
  /// Cell average of the body force at time t.
  std::function<Vec2(const CellGeometry&, double)> body_force;
  /// Cell average of a volumetric fluid source at time t.
  std::function<double(const CellGeometry&, double)> source;
};

/// Uncondensed (u, w, p, pi) system.
///
///     [ A_uu     0        -A_up    0     ] [u ]   [b_u ]
///     [ 0        A_ww     -A_wp   -A_wpi ] [w ] = [b_w ]
///     [ A_up^T   dt A_wp^T Abar_pp 0     ] [p ]   [b_p ]
///     [ 0        A_wpi^T   0       0     ] [pi]   [b_pi]
struct BlockSystem4 {
  int n_u = 0, n_w = 0, n_p = 0, n_pi = 0;
  SparseMatrix A_uu, A_up, A_ww, A_wp, A_wpi, Abar_pp;
  /// Per-cell blocks of A_ww and their row offsets.
  std::vector<Eigen::MatrixXd> A_ww_blocks;
  std::vector<int> w_offset;
  Eigen::VectorXd b_u, b_w, b_p, b_pi;
};

/// Builds all blocks and the load part of the right-hand side at time t
/// (body force, traction, dt * source, flux data). `partition` enables the
/// pressure-jump term in Abar_pp.
BlockSystem4 assemble_blocks(const PolyMesh& mesh, const std::vector<CellGeometry>& geometry,
                             const Material& material, const BoundaryConditions& bc, const Loads& loads,
                             const MacroPartition* partition, double dt, double t,
                             InnerProduct inner_product = InnerProduct::mimetic);

/// Right-hand side blocks only, same conventions as assemble_blocks.
void assemble_load_vectors(const PolyMesh& mesh, const std::vector<CellGeometry>& geometry,
                           const BoundaryConditions& bc, const Loads& loads, double dt, double t,
                           BlockSystem4& blocks);

/// Statically condensed (u, p, pi) system.
///
///     [ A_uu    -A_up      0         ] [u ]   [b_u]
///     [ A_up^T   A_pp      dt A_ppi  ] [p ] = [b_p]
///     [ 0        A_ppi^T   A_pipi    ] [pi]   [b_pi]
struct CondensedSystem {
  int n_u = 0, n_p = 0, n_pi = 0;
  SparseMatrix matrix;
  SparseMatrix A_uu, A_up, A_pp, A_ppi, A_pipi;
  Eigen::VectorXd rhs;
  /// Inverses of the per-cell A_ww blocks.
  std::vector<Eigen::MatrixXd> A_ww_inverse;

  int size() const noexcept { return n_u + n_p + n_pi; }
  int p_offset() const noexcept { return n_u; }
  int pi_offset() const noexcept { return n_u + n_p; }
};

CondensedSystem static_condense(const BlockSystem4& blocks, double dt);

/// Condensed right-hand side from the load vectors of `blocks`.
Eigen::VectorXd condensed_rhs(const BlockSystem4& blocks, const CondensedSystem& system, double dt);

/// w = A_ww^-1 (b_w + A_wp p + A_wpi pi), cell by cell.
Eigen::VectorXd recover_velocity(const BlockSystem4& blocks, const CondensedSystem& system,
                                 const Eigen::VectorXd& p, const Eigen::VectorXd& pi);

/// Dirichlet dofs removed by symmetric row/column elimination.
struct EliminatedSystem {
  SparseMatrix matrix;
  /// Original columns of the fixed dofs, restricted to free rows.
  SparseMatrix coupling;
  std::vector<int> fixed;
  std::vector<bool> is_fixed;

  /// b - coupling * x_fixed on free rows, the prescribed values on fixed rows.
  Eigen::VectorXd apply(const Eigen::VectorXd& rhs, const Eigen::VectorXd& fixed_values) const;
};

EliminatedSystem apply_bcs(const SparseMatrix& matrix, const std::vector<int>& fixed_dofs);

/// Condensed-layout Dirichlet dofs: prescribed displacement components,
/// then pi on pressure faces.
std::vector<int> dirichlet_dofs(const PolyMesh& mesh, const BoundaryConditions& bc);
Eigen::VectorXd dirichlet_values(const PolyMesh& mesh, const BoundaryConditions& bc,
                                 const std::vector<int>& dofs, double t);

}  // namespace poromech
