#pragma once

#include <vector>

#include "poromech/mesh.hpp"

namespace poromech {

/// Geometry of one face seen from one adjacent cell.
struct FaceGeometry {
  Vec2 normal;      ///< outward unit normal n_{K,f}
  Vec2 midpoint;    ///< x_f
  Vec2 to_face;     ///< c_{K,f} = x_f - x_K
  double length{};  ///< |f|
};

struct CellGeometry {
  Vec2 centroid;                    ///< area centroid x_K
  double area{};                    ///< |K|
  double diameter{};                ///< h_K, max pairwise vertex distance
  std::vector<Vec2> vertices;       ///< V_K coordinates, counter-clockwise
  std::vector<FaceGeometry> faces;  ///< in F_K order; face i joins vertices i and i+1
};

/// Geometry of a standalone counter-clockwise polygon. Throws
/// Error(degenerate_mesh) for non-positive area.
CellGeometry polygon_geometry(const std::vector<Vec2>& polygon);

CellGeometry cell_geometry(const PolyMesh& mesh, int cell);

std::vector<CellGeometry> compute_geometry(const PolyMesh& mesh);

/// Largest cell diameter.
double mesh_size(const std::vector<CellGeometry>& geometry);

/// Per face: true iff kappa * n_{K,f} is parallel to c_{K,f} (within
/// `angle_tol` radians) for every cell adjacent to f.
std::vector<bool> check_k_orthogonality(const PolyMesh& mesh, const Mat2& kappa,
                                        double angle_tol = 1e-10);

}  // namespace poromech
