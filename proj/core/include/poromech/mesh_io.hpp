#pragma once

#include <iosfwd>
#include <string>

#include "poromech/mesh.hpp"

namespace poromech {

/// Plain-text mesh format:
///
///     NV NT NF
///     x y                     (NV lines)
///     k v0 v1 ... v(k-1)      (NT lines, counter-clockwise)
///     va vb tag               (NF lines, tag in {int, p, q})
///
/// Tokens are whitespace-delimited; `#` starts a comment.
PolyMesh read_mesh(std::istream& in);
PolyMesh read_mesh_file(const std::string& path);

void write_mesh(std::ostream& out, const PolyMesh& mesh);
void write_mesh_file(const std::string& path, const PolyMesh& mesh);

}  // namespace poromech
