#include "poromech/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poromech/error.hpp"

namespace poromech {

CellGeometry polygon_geometry(const std::vector<Vec2>& polygon) {
  const std::size_t n = polygon.size();
  CellGeometry g;
  g.vertices = polygon;

  // Shift to the first vertex to limit cancellation in the shoelace sums.
  const Vec2 origin = polygon.front();
  double twice_area = 0.0;
  Vec2 moment = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = polygon[i] - origin;
    const Vec2 b = polygon[(i + 1) % n] - origin;
    const double cross = a.x() * b.y() - b.x() * a.y();
    twice_area += cross;
    moment += cross * (a + b);
  }
  g.area = 0.5 * twice_area;
  if (!(g.area > 0.0)) {
    throw Error(ErrorKind::degenerate_mesh, "polygon with non-positive area " + std::to_string(g.area));
  }
  g.centroid = origin + moment / (3.0 * twice_area);

  g.diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      g.diameter = std::max(g.diameter, (polygon[i] - polygon[j]).norm());

  g.faces.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    const Vec2 t = b - a;
    FaceGeometry& fg = g.faces[i];
    fg.length = t.norm();
    if (!(fg.length > 0.0)) throw Error(ErrorKind::degenerate_mesh, "zero-length face");
    fg.normal = Vec2(t.y(), -t.x()) / fg.length;
    fg.midpoint = 0.5 * (a + b);
    fg.to_face = fg.midpoint - g.centroid;
  }
  return g;
}

CellGeometry cell_geometry(const PolyMesh& mesh, int cell) {
  std::vector<Vec2> poly;
  const auto& verts = mesh.cell_vertices(cell);
  poly.reserve(verts.size());
  for (int v : verts) poly.push_back(mesh.vertex(v));
  return polygon_geometry(poly);
}

std::vector<CellGeometry> compute_geometry(const PolyMesh& mesh) {
  std::vector<CellGeometry> out;
  out.reserve(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k) out.push_back(cell_geometry(mesh, k));
  return out;
}

double mesh_size(const std::vector<CellGeometry>& geometry) {
  double h = 0.0;
  for (const auto& g : geometry) h = std::max(h, g.diameter);
  return h;
}

std::vector<bool> check_k_orthogonality(const PolyMesh& mesh, const Mat2& kappa, double angle_tol) {
  std::vector<bool> ok(mesh.num_faces(), true);
  const double sin_tol = std::sin(angle_tol);
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const CellGeometry g = cell_geometry(mesh, k);
    const auto& faces = mesh.cell_faces(k);
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const Vec2 kn = kappa * g.faces[i].normal;
      const Vec2& c = g.faces[i].to_face;
      const double cross = kn.x() * c.y() - kn.y() * c.x();
      const bool parallel = std::abs(cross) <= sin_tol * kn.norm() * c.norm() && kn.dot(c) > 0.0;
      if (!parallel) ok[faces[i]] = false;
    }
  }
  return ok;
}

}  // namespace poromech
