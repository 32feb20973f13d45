#include "poromech/mesh.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "poromech/error.hpp"

namespace poromech {

double signed_area(const std::vector<Vec2>& polygon) {
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

PolyMesh::PolyMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  build_connectivity();
  validate_cells();
}

void PolyMesh::build_connectivity() {
  const int nv = num_vertices();
  vertex_cells_.assign(nv, {});
  cell_faces_.assign(cells_.size(), {});
  faces_.clear();

  std::map<std::pair<int, int>, int> edge_to_face;
  for (int k = 0; k < num_cells(); ++k) {
    const auto& verts = cells_[k];
    const int n = static_cast<int>(verts.size());
    if (n < 3) {
      throw Error(ErrorKind::degenerate_mesh,
                  "cell " + std::to_string(k) + " has fewer than three vertices");
    }
    for (int i = 0; i < n; ++i) {
      const int a = verts[i];
      const int b = verts[(i + 1) % n];
      if (a < 0 || a >= nv || b < 0 || b >= nv) {
        throw Error(ErrorKind::degenerate_mesh,
                    "cell " + std::to_string(k) + " references a missing vertex");
      }
      if (a == b) {
        throw Error(ErrorKind::degenerate_mesh,
                    "cell " + std::to_string(k) + " repeats vertex " + std::to_string(a));
      }
      vertex_cells_[a].push_back(k);

      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_to_face.try_emplace({key.first, key.second}, num_faces());
      if (inserted) {
        Face face;
        face.vertices = {a, b};
        face.cells = {k, -1};
        faces_.push_back(face);
      } else {
        Face& face = faces_[it->second];
        if (face.cells[1] >= 0) {
          throw Error(ErrorKind::degenerate_mesh,
                      "edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") shared by more than two cells");
        }
        if (face.cells[0] == k) {
          throw Error(ErrorKind::degenerate_mesh,
                      "cell " + std::to_string(k) + " uses an edge twice");
        }
        // A conforming neighbour traverses the shared edge in the opposite direction.
        if (face.vertices[0] != b || face.vertices[1] != a) {
          throw Error(ErrorKind::degenerate_mesh,
                      "inconsistent orientation on edge (" + std::to_string(a) + "," +
                          std::to_string(b) + ")");
        }
        face.cells[1] = k;
      }
      cell_faces_[k].push_back(it->second);
    }
  }

  boundary_vertex_.assign(nv, false);
  for (Face& face : faces_) {
    if (face.is_boundary()) {
      face.tag = FaceTag::flux;
      boundary_vertex_[face.vertices[0]] = true;
      boundary_vertex_[face.vertices[1]] = true;
    } else {
      face.tag = FaceTag::interior;
    }
  }
  for (auto& list : vertex_cells_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

void PolyMesh::validate_cells() const {
  for (int k = 0; k < num_cells(); ++k) {
    std::vector<Vec2> poly;
    poly.reserve(cells_[k].size());
    for (int v : cells_[k]) poly.push_back(vertices_[v]);
    if (!(signed_area(poly) > 0.0)) {
      throw Error(ErrorKind::degenerate_mesh,
                  "cell " + std::to_string(k) + " is not positively oriented");
    }
  }
}

int PolyMesh::other_cell(int f, int cell) const {
  const Face& face = faces_[f];
  if (face.cells[0] == cell) return face.cells[1];
  if (face.cells[1] == cell) return face.cells[0];
  return -1;
}

int PolyMesh::local_face_index(int cell, int f) const {
  const auto& list = cell_faces_[cell];
  const auto it = std::find(list.begin(), list.end(), f);
  return it == list.end() ? -1 : static_cast<int>(it - list.begin());
}

Vec2 PolyMesh::face_midpoint(int f) const {
  const Face& face = faces_[f];
  return 0.5 * (vertices_[face.vertices[0]] + vertices_[face.vertices[1]]);
}

void PolyMesh::tag_boundary(const std::function<bool(const Vec2&)>& is_pressure_face) {
  for (int f = 0; f < num_faces(); ++f) {
    Face& face = faces_[f];
    if (!face.is_boundary()) continue;
    face.tag = is_pressure_face(face_midpoint(f)) ? FaceTag::pressure : FaceTag::flux;
  }
}

void PolyMesh::set_face_tag(int f, FaceTag tag) {
  Face& face = faces_.at(f);
  if (face.is_boundary() == (tag == FaceTag::interior)) {
    throw Error(ErrorKind::invalid_argument,
                "face " + std::to_string(f) + ": tag does not match its adjacency");
  }
  face.tag = tag;
}

void PolyMesh::move_vertices(const std::function<Vec2(const Vec2&)>& map) {
  for (Vec2& x : vertices_) x = map(x);
  validate_cells();
}

}  // namespace poromech
