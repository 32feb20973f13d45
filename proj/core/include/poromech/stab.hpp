#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/SparseCore>

#include "poromech/mesh.hpp"

namespace poromech {

/// Non-overlapping aggregation of cells into macro-elements.
struct MacroPartition {
  std::vector<int> macro_of;                     ///< cell -> macro-element id
  std::vector<std::vector<int>> members;         ///< ascending cell ids
  std::vector<std::vector<int>> internal_faces;  ///< faces with both cells in the macro-element
  std::vector<double> upsilon;                   ///< per mesh face; 0 unless internal to a macro-element

  int num_macro() const noexcept { return static_cast<int>(members.size()); }
};

/// Vertex-patch seeding followed by queue-based absorption of the
/// remaining cells. Throws Error(partition_impossible) without internal
/// vertices and Error(disconnected_region) if absorption stalls.
MacroPartition build_macro_elements(const PolyMesh& mesh);

/// Characteristic area of an interior face: sum over both adjacent cells
/// and both face vertices of the vertex-midpoint-centroid-midpoint quads.
double upsilon(const PolyMesh& mesh, int face);

double beta_coeff(double alpha, double G, double lambda);

/// |T| x |T| matrix of beta * sum_E sum_{f in F_E,int} Upsilon_f [[p]] [[chi]].
Eigen::SparseMatrix<double> assemble_jump_matrix(const PolyMesh& mesh, const MacroPartition& partition,
                                                 double beta);

/// CSV with header `cell_id,macro_id`.
void write_partition_csv(std::ostream& out, const MacroPartition& partition);

}  // namespace poromech
