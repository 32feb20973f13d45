#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poromech/mesh.hpp"

namespace poromech {

/// Uniform nx-by-ny quadrilateral mesh of [0,a]x[0,b]. Vertex (i,j) has
/// index j*(nx+1)+i, cell (i,j) has index j*nx+i.
PolyMesh build_cartesian(int nx, int ny, double a = 1.0, double b = 1.0);

/// The skew map g(x,y) applied to one point.
Vec2 skew_map(const Vec2& x);

/// Returns a copy of `mesh` with every vertex moved by skew_map.
PolyMesh apply_skew(const PolyMesh& mesh);

/// Unit-square mesh of quadrilaterals with a diagonal band of triangles:
/// in row j the cell in column floor((j+1/2)*nx/ny) is split along its
/// SW-NE diagonal.
PolyMesh build_hybrid(int nx, int ny);

struct VoronoiOptions {
  int lloyd_iterations = 20;
  std::uint64_t seed = 202101;
  /// Explicit generators; when set, the random draw is skipped.
  std::optional<std::vector<Vec2>> generators;
};

/// Clipped Voronoi diagram of `n_cells` generators in the unit square after
/// Lloyd relaxation.
PolyMesh build_voronoi(int n_cells, const VoronoiOptions& options = {});

/// The clipped Voronoi cells themselves (counter-clockwise polygons), one per
/// generator, in generator order.
std::vector<std::vector<Vec2>> clipped_voronoi_cells(const std::vector<Vec2>& generators);

enum class MeshFamily { cartesian, skewed, hybrid, voronoi1, voronoi20 };

MeshFamily parse_mesh_family(const std::string& name);
std::string to_string(MeshFamily family);
/// True for the families whose unstabilized scheme exhibits spurious
/// pressure modes in the undrained limit.
bool family_needs_stabilization(MeshFamily family);

/// Level-l member of a family on the unit square: 10*2^l cells per side for
/// the structured families, 100*4^l generators for the Voronoi families.
PolyMesh build_family_mesh(MeshFamily family, int level, std::uint64_t seed = 202101);

}  // namespace poromech
