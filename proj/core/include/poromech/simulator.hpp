#pragma once

#include <memory>
#include <optional>
#include <string>

#include "poromech/assembly.hpp"
#include "poromech/preconditioner.hpp"
#include "poromech/solver.hpp"

namespace poromech {

struct Problem {
  PolyMesh mesh;
  Material material;
  BoundaryConditions bc;
  Loads loads;
  bool stabilized = false;
  InnerProduct inner_product = InnerProduct::mimetic;
};

enum class SolverKind { gmres, direct };
SolverKind parse_solver_kind(const std::string& name);
std::string to_string(SolverKind kind);

struct SolverOptions {
  SolverKind kind = SolverKind::gmres;
  GmresOptions gmres;
};

struct State {
  int step = 0;
  double time = 0.0;
  Eigen::VectorXd u, p, pi, w;
};

struct StepReport {
  int step = 0;
  double time = 0.0;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Throws Error(rigid_mode) unless the prescribed displacement components
/// remove all three rigid-body modes.
void check_rigid_modes(const PolyMesh& mesh, const BoundaryConditions& bc);

/// Backward-Euler time stepper on the condensed system. The matrix depends
/// only on the mesh, material and dt, so it is assembled, eliminated and
/// factorized (or preconditioned) once.
class Simulator {
 public:
  Simulator(Problem problem, double dt, SolverOptions options = {});
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// u0 from the momentum balance and (w0, pi0) from the Darcy and
  /// constraint rows, both with p fixed at p0.
  State initial_state(const Eigen::VectorXd& p0, double t0 = 0.0);
  State zero_state(double t0 = 0.0) const;

  State step(const State& previous);

  /// Solves the eliminated system for an already eliminated right-hand side.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs);

  /// Eliminated right-hand side of the step that starts from `previous`.
  Eigen::VectorXd step_rhs(const State& previous);

  const StepReport& last_report() const noexcept { return report_; }
  const Problem& problem() const noexcept { return problem_; }
  const PolyMesh& mesh() const noexcept { return problem_.mesh; }
  const std::vector<CellGeometry>& geometry() const noexcept { return geometry_; }
  const std::optional<MacroPartition>& partition() const noexcept { return partition_; }
  const BlockSystem4& blocks() const noexcept { return blocks_; }
  const CondensedSystem& condensed() const noexcept { return condensed_; }
  const EliminatedSystem& eliminated() const noexcept { return eliminated_; }
  const std::vector<int>& fixed_dofs() const noexcept { return fixed_; }
  double dt() const noexcept { return dt_; }
  const SolverOptions& options() const noexcept { return options_; }
  /// Built on first use for SolverKind::gmres.
  const BlockTriangularPreconditioner& preconditioner();

 private:
  struct DirectSolver;

  Problem problem_;
  double dt_;
  SolverOptions options_;
  std::vector<CellGeometry> geometry_;
  std::optional<MacroPartition> partition_;
  BlockSystem4 blocks_;
  CondensedSystem condensed_;
  std::vector<int> fixed_;
  EliminatedSystem eliminated_;
  std::unique_ptr<BlockTriangularPreconditioner> preconditioner_;
  std::unique_ptr<DirectSolver> direct_;
  StepReport report_;
};

}  // namespace poromech
