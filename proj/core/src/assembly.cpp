#include "poromech/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poromech/error.hpp"
#include "poromech/vem.hpp"

namespace poromech {

using Triplets = std::vector<Eigen::Triplet<double>>;

void Material::validate(int num_cells) const {
  if (!(G > 0.0)) throw Error(ErrorKind::invalid_argument, "shear modulus must be positive");
  if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_argument, "lambda must be non-negative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::invalid_argument, "Biot coefficient must be in [0, 1]");
  if (!(storage >= 0.0)) throw Error(ErrorKind::invalid_argument, "storage must be non-negative");
  if (!cell_kappa.empty() && static_cast<int>(cell_kappa.size()) != num_cells)
    throw Error(ErrorKind::invalid_argument, "per-cell permeability has the wrong length");
}

namespace {

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void check_bc_shapes(const PolyMesh& mesh, const BoundaryConditions& bc) {
  if (static_cast<int>(bc.fixed_displacement.size()) != mesh.num_vertices())
    throw Error(ErrorKind::invalid_argument, "displacement constraints must cover every vertex");
  if (!bc.traction_faces.empty()) {
    if (static_cast<int>(bc.traction_faces.size()) != mesh.num_faces())
      throw Error(ErrorKind::invalid_argument, "traction flags must cover every face");
    for (int f = 0; f < mesh.num_faces(); ++f)
      if (bc.traction_faces[f] && !mesh.face(f).is_boundary())
        throw Error(ErrorKind::invalid_argument, "traction on interior face " + std::to_string(f));
  }
}

}  // namespace

void assemble_load_vectors(const PolyMesh& mesh, const std::vector<CellGeometry>& geometry,
                           const BoundaryConditions& bc, const Loads& loads, double dt, double t,
                           BlockSystem4& blocks) {
  blocks.b_u = Eigen::VectorXd::Zero(2 * mesh.num_vertices());
  blocks.b_w = Eigen::VectorXd::Zero(blocks.n_w);
  blocks.b_p = Eigen::VectorXd::Zero(mesh.num_cells());
  blocks.b_pi = Eigen::VectorXd::Zero(mesh.num_faces());

  for (int k = 0; k < mesh.num_cells(); ++k) {
    const CellGeometry& g = geometry[k];
    const auto& verts = mesh.cell_vertices(k);
    if (loads.body_force) {
      const Eigen::VectorXd fk = body_force_rhs(g, loads.body_force(g, t));
      for (std::size_t i = 0; i < verts.size(); ++i) {
        blocks.b_u(2 * verts[i]) += fk(2 * i);
        blocks.b_u(2 * verts[i] + 1) += fk(2 * i + 1);
      }
    }
    if (loads.source) blocks.b_p(k) += dt * g.area * loads.source(g, t);
  }

  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (!face.is_boundary()) continue;
    const Vec2 a = mesh.vertex(face.vertices[0]);
    const Vec2 b = mesh.vertex(face.vertices[1]);
    const double len = (b - a).norm();
    const Vec2 mid = 0.5 * (a + b);
    if (!bc.traction_faces.empty() && bc.traction_faces[f] && bc.traction) {
      const auto load = traction_rhs(len, bc.traction(mid, t));
      for (int e = 0; e < 2; ++e) {
        blocks.b_u(2 * face.vertices[e]) += load[e].x();
        blocks.b_u(2 * face.vertices[e] + 1) += load[e].y();
      }
    }
    if (face.tag == FaceTag::flux && bc.flux) blocks.b_pi(f) = -len * bc.flux(mid, t);
  }
}

BlockSystem4 assemble_blocks(const PolyMesh& mesh, const std::vector<CellGeometry>& geometry,
                             const Material& material, const BoundaryConditions& bc, const Loads& loads,
                             const MacroPartition* partition, double dt, double t, InnerProduct inner_product) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "time step must be positive");
  if (static_cast<int>(geometry.size()) != mesh.num_cells())
    throw Error(ErrorKind::invalid_argument, "geometry does not match the mesh");
  material.validate(mesh.num_cells());
  check_bc_shapes(mesh, bc);

  BlockSystem4 s;
  s.n_u = 2 * mesh.num_vertices();
  s.n_p = mesh.num_cells();
  s.n_pi = mesh.num_faces();
  s.w_offset.resize(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k) {
    s.w_offset[k] = s.n_w;
    s.n_w += static_cast<int>(mesh.cell_faces(k).size());
  }

  Triplets uu, up, ww, wp, wpi, pp;
  s.A_ww_blocks.reserve(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const CellGeometry& g = geometry[k];
    const auto& verts = mesh.cell_vertices(k);
    const auto& faces = mesh.cell_faces(k);
    const int nv = static_cast<int>(verts.size());

    const LocalVem vem = build_local_vem(g, material.G, material.lambda);
    for (int i = 0; i < 2 * nv; ++i) {
      const int gi = 2 * verts[i / 2] + i % 2;
      for (int j = 0; j < 2 * nv; ++j) uu.emplace_back(gi, 2 * verts[j / 2] + j % 2, vem.stiffness(i, j));
      up.emplace_back(gi, k, material.alpha * g.area * vem.divergence(i));
    }

    const LocalMimetic mfd = build_local_mimetic(g, material.kappa_of(k), inner_product);
    const int off = s.w_offset[k];
    for (std::size_t i = 0; i < faces.size(); ++i) {
      for (std::size_t j = 0; j < faces.size(); ++j) ww.emplace_back(off + i, off + j, mfd.M(i, j));
      wp.emplace_back(off + i, k, g.faces[i].length);
      wpi.emplace_back(off + i, faces[i], -g.faces[i].length);
    }
    s.A_ww_blocks.push_back(mfd.M);
    if (material.storage > 0.0) pp.emplace_back(k, k, material.storage * g.area);
  }

  s.A_uu = from_triplets(s.n_u, s.n_u, uu);
  s.A_up = from_triplets(s.n_u, s.n_p, up);
  s.A_ww = from_triplets(s.n_w, s.n_w, ww);
  s.A_wp = from_triplets(s.n_w, s.n_p, wp);
  s.A_wpi = from_triplets(s.n_w, s.n_pi, wpi);
  s.Abar_pp = from_triplets(s.n_p, s.n_p, pp);
  if (partition) {
    if (static_cast<int>(partition->macro_of.size()) != mesh.num_cells())
      throw Error(ErrorKind::invalid_argument, "partition does not match the mesh");
    s.Abar_pp += assemble_jump_matrix(mesh, *partition, beta_coeff(material.alpha, material.G, material.lambda));
  }

  assemble_load_vectors(mesh, geometry, bc, loads, dt, t, s);
  return s;
}

CondensedSystem static_condense(const BlockSystem4& blocks, double dt) {
  CondensedSystem c;
  c.n_u = blocks.n_u;
  c.n_p = blocks.n_p;
  c.n_pi = blocks.n_pi;

  const int nt = blocks.n_p;
  c.A_ww_inverse.resize(nt);
  Triplets pp_add;
  Eigen::VectorXd len;
  for (int k = 0; k < nt; ++k) {
    const Eigen::MatrixXd& M = blocks.A_ww_blocks[k];
    const int n = static_cast<int>(M.rows());
    const int off = blocks.w_offset[k];
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorKind::degenerate_cell, "velocity block of cell " + std::to_string(k) + " is not SPD");
    c.A_ww_inverse[k] = llt.solve(Eigen::MatrixXd::Identity(n, n));
    const Eigen::MatrixXd& Minv = c.A_ww_inverse[k];

    len = Eigen::VectorXd::Zero(n);
    for (SparseMatrix::InnerIterator it(blocks.A_wp, k); it; ++it) len(it.row() - off) = it.value();
    pp_add.emplace_back(k, k, dt * len.dot(Minv * len));
  }

  // A_ppi = A_wp^T A_ww^-1 A_wpi and A_pipi = A_wpi^T A_ww^-1 A_wpi via the
  // block-diagonal inverse.
  Triplets winv;
  for (int k = 0; k < nt; ++k) {
    const Eigen::MatrixXd& Minv = c.A_ww_inverse[k];
    const int off = blocks.w_offset[k];
    for (int i = 0; i < Minv.rows(); ++i)
      for (int j = 0; j < Minv.cols(); ++j) winv.emplace_back(off + i, off + j, Minv(i, j));
  }
  const SparseMatrix Winv = from_triplets(blocks.n_w, blocks.n_w, winv);
  const SparseMatrix WinvWpi = Winv * blocks.A_wpi;
  c.A_ppi = SparseMatrix(blocks.A_wp.transpose()) * WinvWpi;
  c.A_pipi = SparseMatrix(blocks.A_wpi.transpose()) * WinvWpi;
  c.A_pp = blocks.Abar_pp + from_triplets(nt, nt, pp_add);
  c.A_uu = blocks.A_uu;
  c.A_up = blocks.A_up;
  c.A_ppi.prune(0.0);
  c.A_pipi.prune(0.0);

  const int n = c.size();
  Triplets all;
  all.reserve(c.A_uu.nonZeros() + 2 * c.A_up.nonZeros() + c.A_pp.nonZeros() + 2 * c.A_ppi.nonZeros() +
              c.A_pipi.nonZeros());
  const auto add = [&all](const SparseMatrix& m, int r0, int c0, double scale, bool transpose) {
    for (int col = 0; col < m.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
        const int r = static_cast<int>(it.row());
        const int cc = static_cast<int>(it.col());
        if (transpose) all.emplace_back(r0 + cc, c0 + r, scale * it.value());
        else all.emplace_back(r0 + r, c0 + cc, scale * it.value());
      }
  };
  const int po = c.p_offset();
  const int pio = c.pi_offset();
  add(c.A_uu, 0, 0, 1.0, false);
  add(c.A_up, 0, po, -1.0, false);
  add(c.A_up, po, 0, 1.0, true);
  add(c.A_pp, po, po, 1.0, false);
  add(c.A_ppi, po, pio, dt, false);
  add(c.A_ppi, pio, po, 1.0, true);
  add(c.A_pipi, pio, pio, 1.0, false);
  c.matrix = from_triplets(n, n, all);

  c.rhs = condensed_rhs(blocks, c, dt);
  return c;
}

Eigen::VectorXd condensed_rhs(const BlockSystem4& blocks, const CondensedSystem& system, double dt) {
  Eigen::VectorXd winv_bw = Eigen::VectorXd::Zero(blocks.n_w);
  if (blocks.b_w.size() == blocks.n_w && blocks.b_w.any()) {
    for (int k = 0; k < blocks.n_p; ++k) {
      const int off = blocks.w_offset[k];
      const auto& Minv = system.A_ww_inverse[k];
      winv_bw.segment(off, Minv.rows()) = Minv * blocks.b_w.segment(off, Minv.rows());
    }
  }
  Eigen::VectorXd rhs(system.size());
  rhs.segment(0, system.n_u) = blocks.b_u;
  rhs.segment(system.p_offset(), system.n_p) = blocks.b_p - dt * (blocks.A_wp.transpose() * winv_bw);
  rhs.segment(system.pi_offset(), system.n_pi) = blocks.b_pi - blocks.A_wpi.transpose() * winv_bw;
  return rhs;
}

Eigen::VectorXd recover_velocity(const BlockSystem4& blocks, const CondensedSystem& system,
                                 const Eigen::VectorXd& p, const Eigen::VectorXd& pi) {
  Eigen::VectorXd rhs = blocks.A_wp * p + blocks.A_wpi * pi;
  if (blocks.b_w.size() == blocks.n_w) rhs += blocks.b_w;
  Eigen::VectorXd w(blocks.n_w);
  for (int k = 0; k < blocks.n_p; ++k) {
    const int off = blocks.w_offset[k];
    const auto& Minv = system.A_ww_inverse[k];
    w.segment(off, Minv.rows()) = Minv * rhs.segment(off, Minv.rows());
  }
  return w;
}

Eigen::VectorXd EliminatedSystem::apply(const Eigen::VectorXd& rhs, const Eigen::VectorXd& fixed_values) const {
  if (fixed_values.size() != static_cast<Eigen::Index>(fixed.size()))
    throw Error(ErrorKind::invalid_argument, "Dirichlet value count does not match the fixed dofs");
  Eigen::VectorXd x_fixed = Eigen::VectorXd::Zero(rhs.size());
  for (std::size_t i = 0; i < fixed.size(); ++i) x_fixed(fixed[i]) = fixed_values(i);
  Eigen::VectorXd b = rhs - coupling * x_fixed;
  for (std::size_t i = 0; i < fixed.size(); ++i) b(fixed[i]) = fixed_values(i);
  return b;
}

EliminatedSystem apply_bcs(const SparseMatrix& matrix, const std::vector<int>& fixed_dofs) {
  const int n = static_cast<int>(matrix.rows());
  EliminatedSystem e;
  e.fixed = fixed_dofs;
  e.is_fixed.assign(n, false);
  for (int d : fixed_dofs) {
    if (d < 0 || d >= n) throw Error(ErrorKind::invalid_argument, "Dirichlet dof out of range");
    if (e.is_fixed[d]) throw Error(ErrorKind::invalid_argument, "Dirichlet dof " + std::to_string(d) + " listed twice");
    e.is_fixed[d] = true;
  }
  Triplets kept, coupled;
  for (int col = 0; col < matrix.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      if (e.is_fixed[r]) continue;
      if (e.is_fixed[c]) coupled.emplace_back(r, c, it.value());
      else kept.emplace_back(r, c, it.value());
    }
  for (int d : fixed_dofs) kept.emplace_back(d, d, 1.0);
  e.matrix = from_triplets(n, n, kept);
  e.coupling = from_triplets(n, n, coupled);
  return e;
}

std::vector<int> dirichlet_dofs(const PolyMesh& mesh, const BoundaryConditions& bc) {
  check_bc_shapes(mesh, bc);
  std::vector<int> dofs;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    for (int c = 0; c < 2; ++c)
      if (bc.fixed_displacement[v][c]) dofs.push_back(2 * v + c);
  const int pio = 2 * mesh.num_vertices() + mesh.num_cells();
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (mesh.face(f).tag == FaceTag::pressure) dofs.push_back(pio + f);
  return dofs;
}

Eigen::VectorXd dirichlet_values(const PolyMesh& mesh, const BoundaryConditions& bc, const std::vector<int>& dofs,
                                 double t) {
  const int n_u = 2 * mesh.num_vertices();
  const int pio = n_u + mesh.num_cells();
  Eigen::VectorXd values(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const int d = dofs[i];
    if (d < n_u) {
      values(i) = bc.displacement ? bc.displacement(mesh.vertex(d / 2), t)[d % 2] : 0.0;
    } else {
      values(i) = bc.pressure ? bc.pressure(mesh.face_midpoint(d - pio), t) : 0.0;
    }
  }
  return values;
}

}  // namespace poromech
