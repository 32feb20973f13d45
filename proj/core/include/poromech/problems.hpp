#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "poromech/error_norms.hpp"
#include "poromech/mandel.hpp"
#include "poromech/mesh_generators.hpp"
#include "poromech/simulator.hpp"

namespace poromech {

// ---------------------------------------------------------------------------
// Manufactured solution
// ---------------------------------------------------------------------------

/// p = -cos(pi t) sin(pi x) sin(pi y),
/// u = sin(pi t) (-cos(pi x) cos(pi y), sin(pi x) sin(pi y)).
struct ManufacturedSolution {
  double G = 1.0, lambda = 1.0, alpha = 1.0, storage = 0.0, kappa = 1.0;

  double pressure(const Vec2& x, double t) const;
  Vec2 displacement(const Vec2& x, double t) const;
  /// b = -div sigma'(u) + alpha grad p.
  Vec2 body_force(const Vec2& x, double t) const;
  /// g = d/dt (alpha div u + S p) - kappa lap p, the fluid source that
  /// closes the mass balance for the chosen fields.
  double source(const Vec2& x, double t) const;
};

/// Unit-square problem: Dirichlet u and p on the whole boundary from the
/// exact fields; cell-averaged body force and fluid source.
Problem manufactured_problem(PolyMesh mesh, const ManufacturedSolution& exact = {}, bool stabilized = false);

struct ConvergenceRow {
  int level = 0;
  int cells = 0;
  int unknowns = 0;
  double h = 0.0;
  double dt = 0.0;
  int steps = 0;
  double e_p = 0.0, e_u = 0.0, e_sigma = 0.0;
};

/// Runs the manufactured problem on `mesh` to time T and accumulates the
/// error measures over t_1 .. t_N.
ConvergenceRow run_manufactured(const PolyMesh& mesh, double dt, double T, const SolverOptions& solver = {},
                                bool stabilized = false);

struct ConvergenceOptions {
  MeshFamily family = MeshFamily::cartesian;
  int levels = 4;
  int first_level = 0;
  double dt0 = 0.1;
  double T = 1.0;
  bool stabilized = false;
  SolverOptions solver{SolverKind::direct, {}};
  std::uint64_t seed = 202101;
  int workers = 1;
};

/// Simultaneous refinement: level l uses the level-l mesh and dt0 / 2^l.
std::vector<ConvergenceRow> manufactured_convergence(const ConvergenceOptions& options);

/// Fixed mesh, dt halved `count` times starting from dt0.
std::vector<ConvergenceRow> manufactured_time_refinement(const PolyMesh& mesh, double dt0, int count, double T,
                                                         const SolverOptions& solver = {SolverKind::direct, {}},
                                                         int workers = 1);

struct Rates {
  double e_p = 0.0, e_u = 0.0, e_sigma = 0.0;
};
/// Rates against h (or dt) from the last two rows.
Rates rates_in_h(const std::vector<ConvergenceRow>& rows);
Rates rates_in_dt(const std::vector<ConvergenceRow>& rows);

// ---------------------------------------------------------------------------
// Mandel
// ---------------------------------------------------------------------------

struct MandelSetup {
  Problem problem;
  MandelSolution exact;
  double dt = 0.0;
  Eigen::VectorXd p0;
};

/// Quarter domain [0,a]x[0,b]: u_x = 0 on x = 0, u_y = 0 on y = 0, u_y from
/// the series on y = b, drained and traction-free x = a, no flow elsewhere.
MandelSetup mandel_setup(PolyMesh mesh, const MandelParams& params = {}, double dt_over_tc = 1e-4);

struct MandelProfile {
  double time = 0.0;
  std::vector<double> x;
  std::vector<double> p_h;      ///< normalized by p0
  std::vector<double> p_exact;  ///< exact cell means, normalized by p0
  double max_relative_error = 0.0;
};

struct MandelResult {
  std::vector<MandelProfile> profiles;
  double dt = 0.0;
  double characteristic_time = 0.0;
  int steps = 0;
};

/// Cells crossing the horizontal line y = y0, ordered by centroid x.
std::vector<int> cross_section_cells(const PolyMesh& mesh, double y0);

/// Marches to each requested time (in units of T_c, rounded to whole
/// steps) and samples the pressure profile on y = 0.5 b.
MandelResult run_mandel(const PolyMesh& mesh, const std::vector<double>& times_over_tc,
                        const MandelParams& params = {}, double dt_over_tc = 1e-4,
                        const SolverOptions& solver = {SolverKind::direct, {}});

// ---------------------------------------------------------------------------
// Cantilever
// ---------------------------------------------------------------------------

/// Unit square clamped on x = 0, unit downward traction on y = 1, no flow.
Problem cantilever_problem(PolyMesh mesh, bool stabilized);

struct CantileverResult {
  int cells = 0;
  int unknowns = 0;
  int iterations = 0;
  double relative_residual = 0.0;
  double indicator = 0.0;
  State state;
};

/// One step from the zero state.
CantileverResult run_cantilever(const PolyMesh& mesh, double dt, bool stabilized,
                                const SolverOptions& solver = {});

/// sum over interior faces of Upsilon_f (p_K - p_L)^2, divided by
/// sum_K |K| p_K^2.
double checkerboard_indicator(const PolyMesh& mesh, const Eigen::VectorXd& p);

/// Runs `jobs` on up to `workers` threads; results keep job order.
void run_parallel(int count, int workers, const std::function<void(int)>& job);

/// Worker cap from POROMECH_THREADS (default 1).
int worker_limit_from_env();

}  // namespace poromech
