#include "poromech/vem.hpp"

#include <cmath>

#include "poromech/error.hpp"

namespace poromech {

double scaled_monomial(const CellGeometry& cell, int j, const Vec2& x) {
  switch (j) {
    case 0: return 1.0;
    case 1: return (x.x() - cell.centroid.x()) / cell.diameter;
    case 2: return (x.y() - cell.centroid.y()) / cell.diameter;
  }
  throw Error(ErrorKind::invalid_argument, "monomial index must be 0, 1 or 2");
}

Eigen::MatrixXd pi_nabla(const CellGeometry& cell) {
  const int n = static_cast<int>(cell.vertices.size());
  const double h = cell.diameter;
  Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, n);

  for (int i = 0; i < n; ++i) {
    const FaceGeometry& e = cell.faces[i];
    const int a = i;
    const int b = (i + 1) % n;
    // Boundary mean of each monomial (trapezoid rule, exact for linears).
    for (int j = 0; j < 3; ++j)
      G(0, j) += 0.5 * e.length *
                 (scaled_monomial(cell, j, cell.vertices[a]) + scaled_monomial(cell, j, cell.vertices[b]));
    B(0, a) += 0.5 * e.length;
    B(0, b) += 0.5 * e.length;
    // (grad eta, grad m_k) = (1/h) int_dK eta n_k.
    for (int k = 0; k < 2; ++k) {
      const double w = 0.5 * e.length * e.normal[k] / h;
      B(1 + k, a) += w;
      B(1 + k, b) += w;
    }
  }
  G(1, 1) = G(2, 2) = cell.area / (h * h);

  if (!(G(1, 1) > 1e-14) || !(G(0, 0) > 0.0)) throw Error(ErrorKind::degenerate_cell, "singular projector system");
  return G.partialPivLu().solve(B);
}

MeanOperators mean_operators(const CellGeometry& cell, const Eigen::MatrixXd& projector) {
  const int n = static_cast<int>(cell.vertices.size());
  MeanOperators ops;
  // m2, m3 have zero mean about the centroid, so the mean of Pi eta is its
  // constant coefficient.
  ops.mean = projector.row(0);
  ops.gradient = Eigen::MatrixXd::Zero(2, n);
  for (int i = 0; i < n; ++i) {
    const FaceGeometry& e = cell.faces[i];
    const Vec2 w = 0.5 * e.length * e.normal / cell.area;
    ops.gradient.col(i) += w;
    ops.gradient.col((i + 1) % n) += w;
  }
  return ops;
}

Eigen::Matrix3d elasticity_voigt(double G, double lambda) {
  Eigen::Matrix3d C;
  C << 2 * G + lambda, lambda, 0, lambda, 2 * G + lambda, 0, 0, 0, G;
  return C;
}

namespace {

Eigen::MatrixXd strain_from_gradient(const Eigen::MatrixXd& grad) {
  const int n = static_cast<int>(grad.cols());
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(3, 2 * n);
  for (int i = 0; i < n; ++i) {
    E(0, 2 * i) = grad(0, i);
    E(1, 2 * i + 1) = grad(1, i);
    E(2, 2 * i) = grad(1, i);
    E(2, 2 * i + 1) = grad(0, i);
  }
  return E;
}

Eigen::MatrixXd vertex_projection(const CellGeometry& cell, const Eigen::MatrixXd& projector) {
  const int n = static_cast<int>(cell.vertices.size());
  Eigen::MatrixXd D(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) D(i, j) = scaled_monomial(cell, j, cell.vertices[i]);
  return D * projector;
}

}  // namespace

LocalVem build_local_vem(const CellGeometry& cell, double G, double lambda) {
  if (!(G > 0.0) || lambda < 0.0)
    throw Error(ErrorKind::invalid_argument, "elasticity needs G > 0 and lambda >= 0");
  LocalVem v;
  v.n_v = static_cast<int>(cell.vertices.size());
  v.projector = pi_nabla(cell);
  const MeanOperators ops = mean_operators(cell, v.projector);
  v.mean_row = ops.mean;
  v.mean_gradient = ops.gradient;
  v.strain = strain_from_gradient(ops.gradient);

  v.divergence = Eigen::RowVectorXd::Zero(2 * v.n_v);
  for (int i = 0; i < v.n_v; ++i) {
    v.divergence(2 * i) = ops.gradient(0, i);
    v.divergence(2 * i + 1) = ops.gradient(1, i);
  }

  const Eigen::MatrixXd consistency = cell.area * v.strain.transpose() * elasticity_voigt(G, lambda) * v.strain;
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(v.n_v, v.n_v) - vertex_projection(cell, v.projector);
  const Eigen::MatrixXd scalar_stab = 2.0 * G * residual.transpose() * residual;
  v.stiffness = consistency;
  for (int i = 0; i < v.n_v; ++i)
    for (int j = 0; j < v.n_v; ++j)
      for (int c = 0; c < 2; ++c) v.stiffness(2 * i + c, 2 * j + c) += scalar_stab(i, j);
  return v;
}

Eigen::MatrixXd local_stiffness(const CellGeometry& cell, double G, double lambda) {
  return build_local_vem(cell, G, lambda).stiffness;
}

Eigen::RowVectorXd local_divergence(const CellGeometry& cell) {
  const MeanOperators ops = mean_operators(cell, pi_nabla(cell));
  const int n = static_cast<int>(cell.vertices.size());
  Eigen::RowVectorXd d(2 * n);
  for (int i = 0; i < n; ++i) {
    d(2 * i) = ops.gradient(0, i);
    d(2 * i + 1) = ops.gradient(1, i);
  }
  return d;
}

Eigen::VectorXd body_force_rhs(const CellGeometry& cell, const Vec2& b_mean) {
  const Eigen::RowVectorXd mean = pi_nabla(cell).row(0);
  Eigen::VectorXd out(2 * mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    out(2 * i) = cell.area * b_mean.x() * mean(i);
    out(2 * i + 1) = cell.area * b_mean.y() * mean(i);
  }
  return out;
}

std::array<Vec2, 2> traction_rhs(double face_length, const Vec2& traction) {
  const Vec2 half = 0.5 * face_length * traction;
  return {half, half};
}

}  // namespace poromech
