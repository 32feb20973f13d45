#include "poromech/simulator.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "poromech/error.hpp"

namespace poromech {

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "gmres") return SolverKind::gmres;
  if (name == "direct") return SolverKind::direct;
  throw Error(ErrorKind::invalid_argument, "unknown solver kind '" + name + "'");
}

std::string to_string(SolverKind kind) { return kind == SolverKind::gmres ? "gmres" : "direct"; }

void check_rigid_modes(const PolyMesh& mesh, const BoundaryConditions& bc) {
  if (static_cast<int>(bc.fixed_displacement.size()) != mesh.num_vertices())
    throw Error(ErrorKind::invalid_argument, "displacement constraints must cover every vertex");
  std::vector<Eigen::RowVector3d> rows;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2& x = mesh.vertex(v);
    if (bc.fixed_displacement[v][0]) rows.emplace_back(1.0, 0.0, -x.y());
    if (bc.fixed_displacement[v][1]) rows.emplace_back(0.0, 1.0, x.x());
  }
  Eigen::MatrixXd R(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) R.row(i) = rows[i];
  if (rows.size() < 3) throw Error(ErrorKind::rigid_mode, "fewer than three displacement constraints");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(R);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw Error(ErrorKind::rigid_mode, "displacement constraints leave a rigid-body mode free");
}

// Row/column equilibrated sparse LU.
struct Simulator::DirectSolver {
  Eigen::VectorXd row_scale, col_scale;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;

  explicit DirectSolver(const SparseMatrix& A) {
    const Eigen::Index n = A.rows();
    row_scale = Eigen::VectorXd::Zero(n);
    col_scale = Eigen::VectorXd::Zero(n);
    for (int c = 0; c < A.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(A, c); it; ++it)
        row_scale(it.row()) = std::max(row_scale(it.row()), std::abs(it.value()));
    for (Eigen::Index i = 0; i < n; ++i) row_scale(i) = row_scale(i) > 0.0 ? 1.0 / row_scale(i) : 1.0;
    SparseMatrix S = row_scale.asDiagonal() * A;
    for (int c = 0; c < S.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(S, c); it; ++it) col_scale(c) = std::max(col_scale(c), std::abs(it.value()));
    for (Eigen::Index i = 0; i < n; ++i) col_scale(i) = col_scale(i) > 0.0 ? 1.0 / col_scale(i) : 1.0;
    S = S * col_scale.asDiagonal();
    S.makeCompressed();
    lu.compute(S);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorKind::numerical_breakdown, "sparse LU factorization failed: " + lu.lastErrorMessage());
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    const Eigen::VectorXd y = const_cast<DirectSolver*>(this)->lu.solve(row_scale.cwiseProduct(b));
    return col_scale.cwiseProduct(y);
  }
};

Simulator::Simulator(Problem problem, double dt, SolverOptions options)
    : problem_(std::move(problem)), dt_(dt), options_(options) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "time step must be positive");
  check_rigid_modes(problem_.mesh, problem_.bc);
  geometry_ = compute_geometry(problem_.mesh);
  if (problem_.stabilized) partition_ = build_macro_elements(problem_.mesh);
  blocks_ = assemble_blocks(problem_.mesh, geometry_, problem_.material, problem_.bc, problem_.loads,
                            partition_ ? &*partition_ : nullptr, dt_, 0.0, problem_.inner_product);
  condensed_ = static_condense(blocks_, dt_);
  fixed_ = dirichlet_dofs(problem_.mesh, problem_.bc);
  eliminated_ = apply_bcs(condensed_.matrix, fixed_);
}

Simulator::~Simulator() = default;

const BlockTriangularPreconditioner& Simulator::preconditioner() {
  if (!preconditioner_)
    preconditioner_ = std::make_unique<BlockTriangularPreconditioner>(eliminated_.matrix, condensed_.n_u,
                                                                      condensed_.n_p, condensed_.n_pi);
  return *preconditioner_;
}

State Simulator::zero_state(double t0) const {
  State s;
  s.time = t0;
  s.u = Eigen::VectorXd::Zero(condensed_.n_u);
  s.p = Eigen::VectorXd::Zero(condensed_.n_p);
  s.pi = Eigen::VectorXd::Zero(condensed_.n_pi);
  s.w = Eigen::VectorXd::Zero(blocks_.n_w);
  return s;
}

State Simulator::initial_state(const Eigen::VectorXd& p0, double t0) {
  if (p0.size() != condensed_.n_p) throw Error(ErrorKind::invalid_argument, "initial pressure has the wrong length");
  BlockSystem4 loads = blocks_;
  assemble_load_vectors(problem_.mesh, geometry_, problem_.bc, problem_.loads, dt_, t0, loads);
  const Eigen::VectorXd values = dirichlet_values(problem_.mesh, problem_.bc, fixed_, t0);

  std::vector<int> u_fixed, pi_fixed;
  Eigen::VectorXd u_values(static_cast<Eigen::Index>(fixed_.size())), pi_values(static_cast<Eigen::Index>(fixed_.size()));
  for (std::size_t i = 0; i < fixed_.size(); ++i) {
    if (fixed_[i] < condensed_.n_u) {
      u_values(u_fixed.size()) = values(i);
      u_fixed.push_back(fixed_[i]);
    } else {
      pi_values(pi_fixed.size()) = values(i);
      pi_fixed.push_back(fixed_[i] - condensed_.pi_offset());
    }
  }
  u_values.conservativeResize(u_fixed.size());
  pi_values.conservativeResize(pi_fixed.size());

  State s;
  s.time = t0;
  s.p = p0;

  const EliminatedSystem mech = apply_bcs(condensed_.A_uu, u_fixed);
  Eigen::SimplicialLDLT<SparseMatrix> mech_solver(mech.matrix);
  if (mech_solver.info() != Eigen::Success) throw Error(ErrorKind::rigid_mode, "singular mechanics block");
  s.u = mech_solver.solve(mech.apply(loads.b_u + condensed_.A_up * p0, u_values));

  const Eigen::VectorXd rhs = condensed_rhs(loads, condensed_, dt_);
  const EliminatedSystem flow = apply_bcs(condensed_.A_pipi, pi_fixed);
  Eigen::SimplicialLDLT<SparseMatrix> flow_solver(flow.matrix);
  if (flow_solver.info() != Eigen::Success) throw Error(ErrorKind::numerical_breakdown, "singular face-pressure block");
  const Eigen::VectorXd b_pi =
      rhs.segment(condensed_.pi_offset(), condensed_.n_pi) - condensed_.A_ppi.transpose() * p0;
  s.pi = flow_solver.solve(flow.apply(b_pi, pi_values));
  s.w = recover_velocity(loads, condensed_, s.p, s.pi);
  return s;
}

Eigen::VectorXd Simulator::step_rhs(const State& previous) {
  const double t = previous.time + dt_;
  assemble_load_vectors(problem_.mesh, geometry_, problem_.bc, problem_.loads, dt_, t, blocks_);
  blocks_.b_p += blocks_.A_up.transpose() * previous.u + blocks_.Abar_pp * previous.p;
  const Eigen::VectorXd rhs = condensed_rhs(blocks_, condensed_, dt_);
  return eliminated_.apply(rhs, dirichlet_values(problem_.mesh, problem_.bc, fixed_, t));
}

Eigen::VectorXd Simulator::solve(const Eigen::VectorXd& rhs) {
  report_ = StepReport{};
  if (options_.kind == SolverKind::direct) {
    if (!direct_) direct_ = std::make_unique<DirectSolver>(eliminated_.matrix);
    Eigen::VectorXd x = direct_->solve(rhs);
    const double bn = rhs.norm();
    report_.relative_residual = bn > 0.0 ? (rhs - eliminated_.matrix * x).norm() / bn : 0.0;
    report_.converged = true;
    return x;
  }
  const BlockTriangularPreconditioner& P = preconditioner();
  const SparseMatrix& A = eliminated_.matrix;
  KrylovReport kr;
  Eigen::VectorXd x = gmres([&A](const Eigen::VectorXd& v) { return Eigen::VectorXd(A * v); },
                            [&P](const Eigen::VectorXd& v) { return P.apply(v); }, rhs, options_.gmres, kr);
  report_.iterations = kr.iterations;
  report_.relative_residual = kr.residuals.back();
  report_.converged = kr.converged;
  if (!kr.converged)
    throw Error(ErrorKind::non_convergence, "GMRES stopped after " + std::to_string(kr.iterations) +
                                                " iterations at relative residual " +
                                                std::to_string(kr.residuals.back()));
  return x;
}

State Simulator::step(const State& previous) {
  const Eigen::VectorXd x = solve(step_rhs(previous));
  State s;
  s.step = previous.step + 1;
  s.time = previous.time + dt_;
  s.u = x.segment(0, condensed_.n_u);
  s.p = x.segment(condensed_.p_offset(), condensed_.n_p);
  s.pi = x.segment(condensed_.pi_offset(), condensed_.n_pi);
  s.w = recover_velocity(blocks_, condensed_, s.p, s.pi);
  report_.step = s.step;
  report_.time = s.time;
  return s;
}

}  // namespace poromech
