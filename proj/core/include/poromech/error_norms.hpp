#pragma once

#include <vector>

#include "poromech/assembly.hpp"
#include "poromech/vem.hpp"

namespace poromech {

/// Space-time error measures accumulated step by step with the rectangle
/// rule in time:
///   e_p   = (sum_n dt ||p(t_n) - p_h^n||^2_{L2})^1/2
///   e_u   = (sum_n dt sum_K |K| |mean_K u(t_n) - mean_K u_h^n|^2)^1/2
///   e_sig = (sum_n dt sum_K |K| |sigma_K(I u(t_n)) - sigma_K(u_h^n)|^2)^1/2
/// with sigma_K the VEM mean effective stress and I the vertex interpolant.
class ErrorAccumulator {
 public:
  ErrorAccumulator(const PolyMesh& mesh, const std::vector<CellGeometry>& geometry, double G, double lambda,
                   int quadrature_order = 4);

  void add(double dt, double t, const Eigen::VectorXd& u_h, const Eigen::VectorXd& p_h, const ScalarField& p_exact,
           const VectorField& u_exact);

  double e_p() const;
  double e_u() const;
  double e_sigma() const;

  /// Squared spatial norms of the last call to add().
  double last_p2() const noexcept { return last_p2_; }

 private:
  const PolyMesh& mesh_;
  const std::vector<CellGeometry>& geometry_;
  Eigen::Matrix3d C_;
  int order_;
  std::vector<LocalVem> local_;
  double sum_p_ = 0.0, sum_u_ = 0.0, sum_s_ = 0.0, last_p2_ = 0.0;
};

/// Slope of log(e) against log(x) between two points.
double observed_rate(double x1, double e1, double x2, double e2);

}  // namespace poromech
