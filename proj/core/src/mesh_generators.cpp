#include "poromech/mesh_generators.hpp"

#include <cmath>
#include <numbers>

#include "poromech/error.hpp"

namespace poromech {

PolyMesh build_cartesian(int nx, int ny, double a, double b) {
  if (nx < 1 || ny < 1 || !(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "cartesian mesh needs nx, ny >= 1 and a, b > 0");
  }
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) vertices.emplace_back(a * i / nx, b * j / ny);

  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(nx) * ny);
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return PolyMesh(std::move(vertices), std::move(cells));
}

Vec2 skew_map(const Vec2& x) {
  constexpr double pi = std::numbers::pi;
  const double shift = 0.07 * std::sin(4.0 * pi * x.x()) * std::cos(4.0 * pi * x.y() + 0.5 * pi);
  return {x.x() + shift, x.y() + shift};
}

PolyMesh apply_skew(const PolyMesh& mesh) {
  PolyMesh out = mesh;
  out.move_vertices(skew_map);
  return out;
}

PolyMesh build_hybrid(int nx, int ny) {
  if (nx < 2 || ny < 2) throw Error(ErrorKind::invalid_argument, "hybrid mesh needs nx, ny >= 2");
  std::vector<Vec2> vertices;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices.emplace_back(static_cast<double>(i) / nx, static_cast<double>(j) / ny);

  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < ny; ++j) {
    const int split_column = static_cast<int>(std::floor((j + 0.5) * nx / ny));
    for (int i = 0; i < nx; ++i) {
      const int sw = vid(i, j), se = vid(i + 1, j), ne = vid(i + 1, j + 1), nw = vid(i, j + 1);
      if (i == split_column) {
        cells.push_back({sw, se, ne});
        cells.push_back({sw, ne, nw});
      } else {
        cells.push_back({sw, se, ne, nw});
      }
    }
  }
  return PolyMesh(std::move(vertices), std::move(cells));
}

MeshFamily parse_mesh_family(const std::string& name) {
  if (name == "cartesian") return MeshFamily::cartesian;
  if (name == "skewed") return MeshFamily::skewed;
  if (name == "hybrid") return MeshFamily::hybrid;
  if (name == "voronoi1" || name == "polymesher1") return MeshFamily::voronoi1;
  if (name == "voronoi20" || name == "polymesher20") return MeshFamily::voronoi20;
  throw Error(ErrorKind::invalid_argument, "unknown mesh family '" + name + "'");
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::cartesian: return "cartesian";
    case MeshFamily::skewed: return "skewed";
    case MeshFamily::hybrid: return "hybrid";
    case MeshFamily::voronoi1: return "voronoi1";
    case MeshFamily::voronoi20: return "voronoi20";
  }
  return "unknown";
}

bool family_needs_stabilization(MeshFamily family) {
  return family == MeshFamily::cartesian || family == MeshFamily::skewed ||
         family == MeshFamily::hybrid;
}

PolyMesh build_family_mesh(MeshFamily family, int level, std::uint64_t seed) {
  if (level < 0 || level > 6) throw Error(ErrorKind::invalid_argument, "mesh level must be in [0, 6]");
  const int n = 10 << level;
  switch (family) {
    case MeshFamily::cartesian: return build_cartesian(n, n);
    case MeshFamily::skewed: return apply_skew(build_cartesian(n, n));
    case MeshFamily::hybrid: return build_hybrid(n, n);
    case MeshFamily::voronoi1:
    case MeshFamily::voronoi20: {
      VoronoiOptions opts;
      opts.lloyd_iterations = family == MeshFamily::voronoi1 ? 1 : 20;
      opts.seed = seed;
      return build_voronoi(100 << (2 * level), opts);
    }
  }
  throw Error(ErrorKind::internal, "unhandled mesh family");
}

}  // namespace poromech
