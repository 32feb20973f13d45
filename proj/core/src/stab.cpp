#include "poromech/stab.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <string>

#include "poromech/error.hpp"
#include "poromech/geometry.hpp"

namespace poromech {

MacroPartition build_macro_elements(const PolyMesh& mesh) {
  const int nt = mesh.num_cells();
  MacroPartition part;
  part.macro_of.assign(nt, -1);

  std::vector<bool> visited(mesh.num_vertices(), false);
  bool any_internal = false;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary_vertex(v)) continue;
    any_internal = true;
    if (visited[v]) continue;
    const int id = part.num_macro();
    part.members.emplace_back();
    for (int k : mesh.vertex_cells(v)) {
      part.macro_of[k] = id;
      part.members[id].push_back(k);
      for (int w : mesh.cell_vertices(k)) visited[w] = true;
    }
  }
  if (!any_internal) throw Error(ErrorKind::partition_impossible, "mesh has no internal vertex");

  std::deque<int> queue;
  for (int k = 0; k < nt; ++k)
    if (part.macro_of[k] < 0) queue.push_back(k);

  std::size_t stalled = 0;
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    int best = -1;
    for (int f : mesh.cell_faces(k)) {
      const int other = mesh.other_cell(f, k);
      if (other < 0) continue;
      const int m = part.macro_of[other];
      if (m < 0) continue;
      if (best < 0 || part.members[m].size() < part.members[best].size() ||
          (part.members[m].size() == part.members[best].size() && m < best))
        best = m;
    }
    if (best < 0) {
      queue.push_back(k);
      if (++stalled > queue.size())
        throw Error(ErrorKind::disconnected_region, "cells not face-connected to any macro-element");
      continue;
    }
    stalled = 0;
    part.macro_of[k] = best;
    part.members[best].push_back(k);
  }

  for (auto& m : part.members) std::sort(m.begin(), m.end());

  part.internal_faces.assign(part.num_macro(), {});
  part.upsilon.assign(mesh.num_faces(), 0.0);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.is_boundary()) continue;
    const int m = part.macro_of[face.cells[0]];
    if (m != part.macro_of[face.cells[1]]) continue;
    part.internal_faces[m].push_back(f);
    part.upsilon[f] = upsilon(mesh, f);
  }
  return part;
}

double upsilon(const PolyMesh& mesh, int face) {
  const Face& f = mesh.face(face);
  if (f.is_boundary()) throw Error(ErrorKind::invalid_argument, "upsilon needs an interior face");
  double total = 0.0;
  for (int k : f.cells) {
    const CellGeometry g = cell_geometry(mesh, k);
    const auto& verts = mesh.cell_vertices(k);
    const int n = static_cast<int>(verts.size());
    for (int v : f.vertices) {
      int i = 0;
      while (verts[i] != v) ++i;
      // Vertex i sits between local faces i-1 and i.
      const std::vector<Vec2> quad = {g.vertices[i], g.faces[i].midpoint, g.centroid,
                                      g.faces[(i + n - 1) % n].midpoint};
      total += std::abs(signed_area(quad));
    }
  }
  return total;
}

double beta_coeff(double alpha, double G, double lambda) {
  if (!(G > 0.0)) throw Error(ErrorKind::invalid_argument, "beta needs G > 0");
  return alpha * alpha / (4.0 * (2.0 * G + lambda));
}

Eigen::SparseMatrix<double> assemble_jump_matrix(const PolyMesh& mesh, const MacroPartition& partition,
                                                 double beta) {
  if (static_cast<int>(partition.macro_of.size()) != mesh.num_cells() ||
      static_cast<int>(partition.upsilon.size()) != mesh.num_faces())
    throw Error(ErrorKind::invalid_argument, "partition does not match the mesh");
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& faces : partition.internal_faces) {
    for (int f : faces) {
      const auto [K, L] = mesh.face(f).cells;
      const double w = beta * partition.upsilon[f];
      trips.emplace_back(K, K, w);
      trips.emplace_back(L, L, w);
      trips.emplace_back(K, L, -w);
      trips.emplace_back(L, K, -w);
    }
  }
  Eigen::SparseMatrix<double> J(mesh.num_cells(), mesh.num_cells());
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

void write_partition_csv(std::ostream& out, const MacroPartition& partition) {
  out << "cell_id,macro_id\n";
  for (std::size_t k = 0; k < partition.macro_of.size(); ++k) out << k << ',' << partition.macro_of[k] << '\n';
}

}  // namespace poromech
