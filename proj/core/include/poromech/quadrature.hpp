#pragma once

#include <functional>
#include <vector>

#include "poromech/geometry.hpp"

namespace poromech {

struct QuadPoint {
  Vec2 x;
  double w{};
};

/// Gauss-Legendre nodes and weights on [0, 1], n in [1, 6].
std::vector<std::pair<double, double>> gauss_legendre(int n);

/// Rule on a polygon: fan triangulation from the centroid, each triangle
/// covered by an n-by-n collapsed (Duffy) Gauss product rule. Exact for
/// polynomials of degree 2n-2 on star-shaped cells.
std::vector<QuadPoint> polygon_quadrature(const CellGeometry& cell, int n = 4);

double integrate(const CellGeometry& cell, const std::function<double(const Vec2&)>& f, int n = 4);

/// (1/|K|) * integral of f over K.
double cell_average(const CellGeometry& cell, const std::function<double(const Vec2&)>& f, int n = 4);
Vec2 cell_average(const CellGeometry& cell, const std::function<Vec2(const Vec2&)>& f, int n = 4);

}  // namespace poromech
