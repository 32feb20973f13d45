#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace poromech {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Face subsets: interior faces, boundary faces on the pressure boundary
/// and boundary faces on the flux boundary.
enum class FaceTag { interior, pressure, flux };

struct Face {
  /// Endpoints, ordered counter-clockwise with respect to cells[0].
  std::array<int, 2> vertices{};
  /// Adjacent cells; cells[0] < cells[1]. Boundary faces have cells[1] == -1.
  std::array<int, 2> cells{-1, -1};
  FaceTag tag = FaceTag::flux;

  bool is_boundary() const noexcept { return cells[1] < 0; }
};

/// Conforming polygonal mesh: the {cells, faces, vertices} triplet with
/// connectivity. Immutable after construction except for boundary tags.
class PolyMesh {
 public:
  PolyMesh() = default;

  /// Builds faces and connectivity from counter-clockwise cell vertex lists.
  /// Throws Error(degenerate_mesh) on non-conforming input, repeated
  /// vertices, or a cell that is not positively oriented.
  PolyMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells);

  int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
  int num_cells() const noexcept { return static_cast<int>(cells_.size()); }
  int num_faces() const noexcept { return static_cast<int>(faces_.size()); }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::vector<Vec2>& vertices() const noexcept { return vertices_; }

  /// V_K in counter-clockwise order.
  const std::vector<int>& cell_vertices(int cell) const { return cells_[cell]; }
  /// F_K; entry i joins cell_vertices(cell)[i] and [i+1].
  const std::vector<int>& cell_faces(int cell) const { return cell_faces_[cell]; }
  /// Cells sharing a vertex, ascending.
  const std::vector<int>& vertex_cells(int v) const { return vertex_cells_[v]; }

  const Face& face(int f) const { return faces_[f]; }
  const std::vector<Face>& faces() const noexcept { return faces_; }

  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }
  /// The neighbour of `cell` across face f, or -1.
  int other_cell(int f, int cell) const;

  /// Local index of face f in F_K, or -1.
  int local_face_index(int cell, int f) const;

  Vec2 face_midpoint(int f) const;

  /// Retag every boundary face: pressure if the predicate holds at the face
  /// midpoint, flux otherwise. Interior faces are unaffected.
  void tag_boundary(const std::function<bool(const Vec2&)>& is_pressure_face);
  /// Sets a single face tag; throws on interior/boundary mismatch.
  void set_face_tag(int f, FaceTag tag);

  /// Number of unknowns of the condensed (u, p, pi) system.
  int condensed_unknowns() const noexcept { return 2 * num_vertices() + num_cells() + num_faces(); }

  /// Moves vertices in place; connectivity is kept. Throws
  /// Error(degenerate_mesh) if any cell loses positive area.
  void move_vertices(const std::function<Vec2(const Vec2&)>& map);

 private:
  void build_connectivity();
  void validate_cells() const;

  std::vector<Vec2> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<std::vector<int>> cell_faces_;
  std::vector<std::vector<int>> vertex_cells_;
  std::vector<Face> faces_;
  std::vector<bool> boundary_vertex_;
};

/// Signed shoelace area of a vertex loop.
double signed_area(const std::vector<Vec2>& polygon);

}  // namespace poromech
