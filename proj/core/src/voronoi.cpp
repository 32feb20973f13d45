#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_map>

#include "poromech/error.hpp"
#include "poromech/geometry.hpp"
#include "poromech/mesh_generators.hpp"

namespace poromech {

namespace {

constexpr double kMergeTol = 1e-10;
constexpr double kSnapTol = 1e-12;

using Polygon = std::vector<Vec2>;

// Keeps the part of a convex polygon with (x - mid) . dir <= 0.
Polygon clip_half_plane(const Polygon& poly, const Vec2& mid, const Vec2& dir) {
  Polygon out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double da = (a - mid).dot(dir);
    const double db = (b - mid).dot(dir);
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double s = da / (da - db);
      out.push_back(a + s * (b - a));
    }
  }
  return out;
}

double snap(double x) {
  if (std::abs(x) < kSnapTol) return 0.0;
  if (std::abs(x - 1.0) < kSnapTol) return 1.0;
  return x;
}

// Uniform bucket grid over the unit square for neighbour searches.
class BucketGrid {
 public:
  explicit BucketGrid(const std::vector<Vec2>& points) : points_(points) {
    n_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(points.size()) / 2.0)));
    size_ = 1.0 / n_;
    buckets_.assign(static_cast<std::size_t>(n_) * n_, {});
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
      buckets_[index(bucket_of(points[i].x()), bucket_of(points[i].y()))].push_back(i);
    }
  }

  int bucket_of(double x) const { return std::clamp(static_cast<int>(x / size_), 0, n_ - 1); }
  int index(int i, int j) const { return j * n_ + i; }
  int resolution() const { return n_; }
  double bucket_size() const { return size_; }
  const std::vector<int>& bucket(int i, int j) const { return buckets_[index(i, j)]; }

 private:
  const std::vector<Vec2>& points_;
  int n_ = 1;
  double size_ = 1.0;
  std::vector<std::vector<int>> buckets_;
};

Polygon voronoi_cell(int site, const std::vector<Vec2>& gens, const BucketGrid& grid) {
  const Vec2& x = gens[site];
  Polygon poly = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  const int bi = grid.bucket_of(x.x());
  const int bj = grid.bucket_of(x.y());
  const int n = grid.resolution();

  const auto radius = [&]() {
    double r = 0.0;
    for (const Vec2& p : poly) r = std::max(r, (p - x).norm());
    return r;
  };

  for (int ring = 0; ring <= n; ++ring) {
    for (int j = bj - ring; j <= bj + ring; ++j) {
      for (int i = bi - ring; i <= bi + ring; ++i) {
        if (i < 0 || j < 0 || i >= n || j >= n) continue;
        if (std::max(std::abs(i - bi), std::abs(j - bj)) != ring) continue;
        for (int other : grid.bucket(i, j)) {
          if (other == site) continue;
          const Vec2 d = gens[other] - x;
          if (d.norm() < 1e-12) {
            throw Error(ErrorKind::degenerate_mesh, "duplicate Voronoi generators");
          }
          poly = clip_half_plane(poly, x + 0.5 * d, d);
        }
      }
    }
    // Generators outside this ring are at least ring*size away.
    if (ring * grid.bucket_size() > 2.0 * radius()) break;
  }
  for (Vec2& p : poly) p = Vec2(snap(p.x()), snap(p.y()));
  return poly;
}

class VertexMerger {
 public:
  int insert(const Vec2& p) {
    const long long qx = static_cast<long long>(std::floor(p.x() / kMergeTol));
    const long long qy = static_cast<long long>(std::floor(p.y() / kMergeTol));
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = buckets_.find(key(qx + dx, qy + dy));
        if (it == buckets_.end()) continue;
        for (int v : it->second)
          if ((vertices_[v] - p).norm() <= kMergeTol) return v;
      }
    }
    const int id = static_cast<int>(vertices_.size());
    vertices_.push_back(p);
    buckets_[key(qx, qy)].push_back(id);
    return id;
  }

  std::vector<Vec2> take() { return std::move(vertices_); }

 private:
  static unsigned long long key(long long i, long long j) {
    return static_cast<unsigned long long>(i) * 0x9E3779B97F4A7C15ULL ^ static_cast<unsigned long long>(j);
  }

  std::vector<Vec2> vertices_;
  std::unordered_map<unsigned long long, std::vector<int>> buckets_;
};

bool on_square_boundary(const Vec2& a, const Vec2& b) {
  const auto on = [](double u, double v, double c) { return u == c && v == c; };
  return on(a.x(), b.x(), 0.0) || on(a.x(), b.x(), 1.0) || on(a.y(), b.y(), 0.0) ||
         on(a.y(), b.y(), 1.0);
}

PolyMesh assemble_mesh(const std::vector<Polygon>& polys) {
  VertexMerger merger;
  std::vector<std::vector<int>> cells;
  cells.reserve(polys.size());
  for (const Polygon& poly : polys) {
    std::vector<int> ids;
    for (const Vec2& p : poly) {
      const int id = merger.insert(p);
      if (ids.empty() || ids.back() != id) ids.push_back(id);
    }
    while (ids.size() > 1 && ids.front() == ids.back()) ids.pop_back();
    if (ids.size() < 3) throw Error(ErrorKind::degenerate_mesh, "collapsed Voronoi cell");
    cells.push_back(std::move(ids));
  }
  PolyMesh mesh(merger.take(), std::move(cells));
  for (const Face& f : mesh.faces()) {
    if (f.is_boundary() && !on_square_boundary(mesh.vertex(f.vertices[0]), mesh.vertex(f.vertices[1]))) {
      throw Error(ErrorKind::degenerate_mesh, "non-conforming Voronoi edge inside the domain");
    }
  }
  return mesh;
}

}  // namespace

std::vector<std::vector<Vec2>> clipped_voronoi_cells(const std::vector<Vec2>& generators) {
  const BucketGrid grid(generators);
  std::vector<Polygon> cells;
  cells.reserve(generators.size());
  for (int i = 0; i < static_cast<int>(generators.size()); ++i)
    cells.push_back(voronoi_cell(i, generators, grid));
  return cells;
}

PolyMesh build_voronoi(int n_cells, const VoronoiOptions& options) {
  if (n_cells < 4) throw Error(ErrorKind::invalid_argument, "voronoi mesh needs at least 4 cells");
  if (options.lloyd_iterations < 0) throw Error(ErrorKind::invalid_argument, "negative Lloyd iteration count");

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Vec2> gens;
  if (options.generators) {
    gens = *options.generators;
    if (static_cast<int>(gens.size()) != n_cells)
      throw Error(ErrorKind::invalid_argument, "generator count does not match n_cells");
  } else {
    gens.reserve(n_cells);
    for (int i = 0; i < n_cells; ++i) {
      const double x = unit(rng);
      const double y = unit(rng);
      gens.emplace_back(x, y);
    }
  }

  constexpr int kMaxAttempts = 8;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    try {
      std::vector<Vec2> sites = gens;
      std::vector<Polygon> cells = clipped_voronoi_cells(sites);
      for (int it = 0; it < options.lloyd_iterations; ++it) {
        for (std::size_t i = 0; i < sites.size(); ++i) sites[i] = polygon_geometry(cells[i]).centroid;
        cells = clipped_voronoi_cells(sites);
      }
      return assemble_mesh(cells);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_mesh) throw;
      // Perturb the generators and retry.
      std::normal_distribution<double> jitter(0.0, 1e-7);
      for (Vec2& g : gens) {
        g.x() = std::clamp(g.x() + jitter(rng), 1e-9, 1.0 - 1e-9);
        g.y() = std::clamp(g.y() + jitter(rng), 1e-9, 1.0 - 1e-9);
      }
    }
  }
  throw Error(ErrorKind::degenerate_mesh,
              "could not build a conforming Voronoi mesh after " + std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace poromech
