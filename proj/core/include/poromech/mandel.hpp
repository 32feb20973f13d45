#pragma once

#include <vector>

#include "poromech/mesh.hpp"

namespace poromech {

struct MandelParams {
  double a = 1.0;  ///< half-width [m]
  double b = 1.0;  ///< half-height [m]
  double F = 200.0;  ///< load per unit length [N/m]
  double G = 4.167e5;
  double lambda = 2.778e5;
  double alpha = 1.0;
  double storage = 0.0;
  double kappa = 1e-15;
  int n_terms = 200;

  double bulk_modulus() const { return lambda + 2.0 * G / 3.0; }
  double skempton() const;
  double poisson() const;
  double undrained_poisson() const;
  double consolidation_coefficient() const;
  /// a^2 / (kappa (lambda + 2G)).
  double characteristic_time() const;
};

/// Classical series solution of Mandel's problem on the quarter domain
/// [0,a] x [0,b].
class MandelSolution {
 public:
  explicit MandelSolution(const MandelParams& params);

  /// Initial undrained pressure F B (1 + nu_u) / (3a).
  double initial_pressure() const noexcept { return p0_; }
  double pressure(double x, double t) const;
  /// Displacement at (x, y); t = 0 gives the undrained limit.
  Vec2 displacement(const Vec2& x, double t) const;

  /// Positive roots of tan(r) = r (1 - nu) / (nu_u - nu), ascending.
  const std::vector<double>& roots() const noexcept { return roots_; }
  const MandelParams& params() const noexcept { return params_; }

 private:
  MandelParams params_;
  double nu_, nu_u_, c_, p0_;
  std::vector<double> roots_;
};

/// Roots of tan(r) = k r, one per branch ((n-1) pi, (n-1) pi + pi/2), k > 1.
std::vector<double> mandel_roots(double k, int n_terms);

}  // namespace poromech
