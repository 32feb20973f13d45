#include "poromech/quadrature.hpp"

#include <cmath>

#include "poromech/error.hpp"

namespace poromech {

std::vector<std::pair<double, double>> gauss_legendre(int n) {
  // Symmetric nodes on [-1, 1] for the positive half.
  std::vector<std::pair<double, double>> ref;
  switch (n) {
    case 1: ref = {{0.0, 2.0}}; break;
    case 2: ref = {{-0.5773502691896257, 1.0}, {0.5773502691896257, 1.0}}; break;
    case 3:
      ref = {{-0.7745966692414834, 0.5555555555555556}, {0.0, 0.8888888888888888},
             {0.7745966692414834, 0.5555555555555556}};
      break;
    case 4:
      ref = {{-0.8611363115940526, 0.3478548451374538}, {-0.3399810435848563, 0.6521451548625461},
             {0.3399810435848563, 0.6521451548625461}, {0.8611363115940526, 0.3478548451374538}};
      break;
    case 5:
      ref = {{-0.9061798459386640, 0.2369268850561891}, {-0.5384693101056831, 0.4786286704993665},
             {0.0, 0.5688888888888889}, {0.5384693101056831, 0.4786286704993665},
             {0.9061798459386640, 0.2369268850561891}};
      break;
    case 6:
      ref = {{-0.9324695142031521, 0.1713244923791704}, {-0.6612093864662645, 0.3607615730481386},
             {-0.2386191860831969, 0.4679139345726910}, {0.2386191860831969, 0.4679139345726910},
             {0.6612093864662645, 0.3607615730481386}, {0.9324695142031521, 0.1713244923791704}};
      break;
    default: throw Error(ErrorKind::invalid_argument, "Gauss-Legendre order must be in [1, 6]");
  }
  for (auto& [x, w] : ref) {
    x = 0.5 * (x + 1.0);
    w *= 0.5;
  }
  return ref;
}

std::vector<QuadPoint> polygon_quadrature(const CellGeometry& cell, int n) {
  const auto gl = gauss_legendre(n);
  std::vector<QuadPoint> pts;
  const std::size_t nv = cell.vertices.size();
  pts.reserve(nv * gl.size() * gl.size());
  const Vec2& c = cell.centroid;
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec2 e1 = cell.vertices[i] - c;
    const Vec2 e2 = cell.vertices[(i + 1) % nv] - c;
    const double jac = std::abs(e1.x() * e2.y() - e1.y() * e2.x());
    for (const auto& [s, ws] : gl) {
      for (const auto& [r, wr] : gl) {
        // (s, r) in the unit square -> (s(1-r), s r) in the reference triangle.
        const double a = s * (1.0 - r);
        const double b = s * r;
        pts.push_back({c + a * e1 + b * e2, ws * wr * s * jac});
      }
    }
  }
  return pts;
}

double integrate(const CellGeometry& cell, const std::function<double(const Vec2&)>& f, int n) {
  double sum = 0.0;
  for (const auto& q : polygon_quadrature(cell, n)) sum += q.w * f(q.x);
  return sum;
}

double cell_average(const CellGeometry& cell, const std::function<double(const Vec2&)>& f, int n) {
  return integrate(cell, f, n) / cell.area;
}

Vec2 cell_average(const CellGeometry& cell, const std::function<Vec2(const Vec2&)>& f, int n) {
  Vec2 sum = Vec2::Zero();
  for (const auto& q : polygon_quadrature(cell, n)) sum += q.w * f(q.x);
  return sum / cell.area;
}

}  // namespace poromech
