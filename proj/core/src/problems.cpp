#include "poromech/problems.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "poromech/error.hpp"
#include "poromech/quadrature.hpp"

namespace poromech {

namespace {
constexpr double pi = std::numbers::pi;

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }
}  // namespace

double ManufacturedSolution::pressure(const Vec2& x, double t) const {
  return -std::cos(pi * t) * std::sin(pi * x.x()) * std::sin(pi * x.y());
}

Vec2 ManufacturedSolution::displacement(const Vec2& x, double t) const {
  const double s = std::sin(pi * t);
  return {-s * std::cos(pi * x.x()) * std::cos(pi * x.y()), s * std::sin(pi * x.x()) * std::sin(pi * x.y())};
}

Vec2 ManufacturedSolution::body_force(const Vec2& x, double t) const {
  const double s = std::sin(pi * t);
  const double cx = std::cos(pi * x.x()), sx = std::sin(pi * x.x());
  const double cy = std::cos(pi * x.y()), sy = std::sin(pi * x.y());
  // Both lap u and grad div u equal 2 pi^2 s (cx cy, -sx sy) for these fields.
  const Vec2 shape(cx * cy, -sx * sy);
  const Vec2 div_stress = -(2.0 * G + lambda) * 2.0 * pi * pi * s * shape;
  const Vec2 grad_p = -std::cos(pi * t) * pi * Vec2(cx * sy, sx * cy);
  return div_stress + alpha * grad_p;
}

double ManufacturedSolution::source(const Vec2& x, double t) const {
  const double sx = std::sin(pi * x.x());
  const double cy = std::cos(pi * x.y()), sy = std::sin(pi * x.y());
  const double div_u_dot = 2.0 * pi * pi * std::cos(pi * t) * sx * cy;
  const double p_dot = pi * std::sin(pi * t) * sx * sy;
  const double lap_p = 2.0 * pi * pi * std::cos(pi * t) * sx * sy;
  return alpha * div_u_dot + storage * p_dot - kappa * lap_p;
}

Problem manufactured_problem(PolyMesh mesh, const ManufacturedSolution& exact, bool stabilized) {
  Problem p;
  mesh.tag_boundary([](const Vec2&) { return true; });
  p.mesh = std::move(mesh);
  p.material.G = exact.G;
  p.material.lambda = exact.lambda;
  p.material.alpha = exact.alpha;
  p.material.storage = exact.storage;
  p.material.kappa = exact.kappa * Mat2::Identity();
  p.stabilized = stabilized;

  p.bc.fixed_displacement.assign(p.mesh.num_vertices(), {false, false});
  for (int v = 0; v < p.mesh.num_vertices(); ++v)
    if (p.mesh.is_boundary_vertex(v)) p.bc.fixed_displacement[v] = {true, true};
  p.bc.displacement = [exact](const Vec2& x, double t) { return exact.displacement(x, t); };
  p.bc.pressure = [exact](const Vec2& x, double t) { return exact.pressure(x, t); };
  p.bc.flux = [](const Vec2&, double) { return 0.0; };
  p.loads.body_force = [exact](const CellGeometry& g, double t) {
    return cell_average(g, [&](const Vec2& x) { return exact.body_force(x, t); });
  };
  p.loads.source = [exact](const CellGeometry& g, double t) {
    return cell_average(g, [&](const Vec2& x) { return exact.source(x, t); });
  };
  return p;
}

ConvergenceRow run_manufactured(const PolyMesh& mesh, double dt, double T, const SolverOptions& solver,
                                bool stabilized) {
  const ManufacturedSolution exact;
  Simulator sim(manufactured_problem(mesh, exact, stabilized), dt, solver);
  const auto& geom = sim.geometry();

  Eigen::VectorXd p0(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k)
    p0(k) = cell_average(geom[k], [&](const Vec2& x) { return exact.pressure(x, 0.0); });
  State state = sim.initial_state(p0, 0.0);

  ErrorAccumulator acc(sim.mesh(), geom, exact.G, exact.lambda);
  const ScalarField pe = [&exact](const Vec2& x, double t) { return exact.pressure(x, t); };
  const VectorField ue = [&exact](const Vec2& x, double t) { return exact.displacement(x, t); };
  const int steps = static_cast<int>(std::lround(T / dt));
  for (int n = 0; n < steps; ++n) {
    state = sim.step(state);
    acc.add(dt, state.time, state.u, state.p, pe, ue);
  }

  ConvergenceRow row;
  row.cells = mesh.num_cells();
  row.unknowns = sim.condensed().size();
  row.h = mesh_size(geom);
  row.dt = dt;
  row.steps = steps;
  row.e_p = acc.e_p();
  row.e_u = acc.e_u();
  row.e_sigma = acc.e_sigma();
  return row;
}

std::vector<ConvergenceRow> manufactured_convergence(const ConvergenceOptions& options) {
  if (options.levels < 1) throw Error(ErrorKind::invalid_argument, "need at least one level");
  std::vector<ConvergenceRow> rows(options.levels);
  run_parallel(options.levels, options.workers, [&](int i) {
    const int level = options.first_level + i;
    const PolyMesh mesh = build_family_mesh(options.family, level, options.seed);
    const double dt = options.dt0 / std::pow(2.0, i);
    rows[i] = run_manufactured(mesh, dt, options.T, options.solver, options.stabilized);
    rows[i].level = level;
  });
  return rows;
}

std::vector<ConvergenceRow> manufactured_time_refinement(const PolyMesh& mesh, double dt0, int count, double T,
                                                         const SolverOptions& solver, int workers) {
  std::vector<ConvergenceRow> rows(count);
  run_parallel(count, workers, [&](int i) {
    rows[i] = run_manufactured(mesh, dt0 / std::pow(2.0, i), T, solver, false);
    rows[i].level = i;
  });
  return rows;
}

Rates rates_in_h(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) throw Error(ErrorKind::invalid_argument, "rates need two rows");
  const auto& a = rows[rows.size() - 2];
  const auto& b = rows.back();
  return {observed_rate(a.h, a.e_p, b.h, b.e_p), observed_rate(a.h, a.e_u, b.h, b.e_u),
          observed_rate(a.h, a.e_sigma, b.h, b.e_sigma)};
}

Rates rates_in_dt(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) throw Error(ErrorKind::invalid_argument, "rates need two rows");
  const auto& a = rows[rows.size() - 2];
  const auto& b = rows.back();
  return {observed_rate(a.dt, a.e_p, b.dt, b.e_p), observed_rate(a.dt, a.e_u, b.dt, b.e_u),
          observed_rate(a.dt, a.e_sigma, b.dt, b.e_sigma)};
}

MandelSetup mandel_setup(PolyMesh mesh, const MandelParams& params, double dt_over_tc) {
  MandelSolution exact(params);
  const double a = params.a, b = params.b;
  for (const Vec2& x : mesh.vertices())
    if (x.x() < -1e-12 || x.x() > a * (1 + 1e-12) || x.y() < -1e-12 || x.y() > b * (1 + 1e-12))
      throw Error(ErrorKind::invalid_argument, "Mandel mesh must cover [0,a]x[0,b]");
  mesh.tag_boundary([a](const Vec2& x) { return near(x.x(), a); });

  MandelSetup s{Problem{}, exact, dt_over_tc * params.characteristic_time(), {}};
  Problem& p = s.problem;
  p.mesh = std::move(mesh);
  p.material.G = params.G;
  p.material.lambda = params.lambda;
  p.material.alpha = params.alpha;
  p.material.storage = params.storage;
  p.material.kappa = params.kappa * Mat2::Identity();

  p.bc.fixed_displacement.assign(p.mesh.num_vertices(), {false, false});
  for (int v = 0; v < p.mesh.num_vertices(); ++v) {
    const Vec2& x = p.mesh.vertex(v);
    if (near(x.x(), 0.0)) p.bc.fixed_displacement[v][0] = true;
    if (near(x.y(), 0.0) || near(x.y(), b)) p.bc.fixed_displacement[v][1] = true;
  }
  p.bc.displacement = [exact](const Vec2& x, double t) { return exact.displacement(x, t); };
  p.bc.pressure = [](const Vec2&, double) { return 0.0; };
  p.bc.flux = [](const Vec2&, double) { return 0.0; };
  s.p0 = Eigen::VectorXd::Constant(p.mesh.num_cells(), exact.initial_pressure());
  return s;
}

std::vector<int> cross_section_cells(const PolyMesh& mesh, double y0) {
  std::vector<std::pair<double, int>> picked;
  for (int k = 0; k < mesh.num_cells(); ++k) {
    double lo = 1e300, hi = -1e300;
    for (int v : mesh.cell_vertices(k)) {
      lo = std::min(lo, mesh.vertex(v).y());
      hi = std::max(hi, mesh.vertex(v).y());
    }
    if (lo <= y0 && y0 < hi) picked.emplace_back(cell_geometry(mesh, k).centroid.x(), k);
  }
  std::sort(picked.begin(), picked.end());
  std::vector<int> cells;
  for (const auto& [x, k] : picked) cells.push_back(k);
  return cells;
}

MandelResult run_mandel(const PolyMesh& mesh, const std::vector<double>& times_over_tc, const MandelParams& params,
                        double dt_over_tc, const SolverOptions& solver) {
  MandelSetup setup = mandel_setup(mesh, params, dt_over_tc);
  const MandelSolution& exact = setup.exact;
  Simulator sim(std::move(setup.problem), setup.dt, solver);
  const double tc = params.characteristic_time();
  const double p0 = exact.initial_pressure();

  MandelResult result;
  result.dt = setup.dt;
  result.characteristic_time = tc;

  std::vector<int> targets;
  for (double t : times_over_tc) targets.push_back(static_cast<int>(std::lround(t / dt_over_tc)));
  std::vector<int> order(targets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return targets[i] < targets[j]; });

  const std::vector<int> cells = cross_section_cells(sim.mesh(), 0.5 * params.b);
  result.profiles.resize(targets.size());
  State state = sim.initial_state(setup.p0, 0.0);
  for (int idx : order) {
    while (state.step < targets[idx]) state = sim.step(state);
    MandelProfile& prof = result.profiles[idx];
    prof.time = state.time;
    for (int k : cells) {
      const CellGeometry& g = sim.geometry()[k];
      const double pe = cell_average(g, [&](const Vec2& x) { return exact.pressure(x.x(), state.time); }) / p0;
      const double ph = state.p(k) / p0;
      prof.x.push_back(g.centroid.x());
      prof.p_h.push_back(ph);
      prof.p_exact.push_back(pe);
      prof.max_relative_error = std::max(prof.max_relative_error, std::abs(ph - pe));
    }
  }
  result.steps = state.step;
  return result;
}

Problem cantilever_problem(PolyMesh mesh, bool stabilized) {
  Problem p;
  p.mesh = std::move(mesh);
  p.material.G = 3.571e4;
  p.material.lambda = 1.429e5;
  p.material.alpha = 1.0;
  p.material.storage = 0.0;
  p.material.kappa = 1e-7 * Mat2::Identity();
  p.stabilized = stabilized;

  p.bc.fixed_displacement.assign(p.mesh.num_vertices(), {false, false});
  for (int v = 0; v < p.mesh.num_vertices(); ++v)
    if (near(p.mesh.vertex(v).x(), 0.0)) p.bc.fixed_displacement[v] = {true, true};
  p.bc.displacement = [](const Vec2&, double) { return Vec2(0.0, 0.0); };
  p.bc.traction_faces.assign(p.mesh.num_faces(), false);
  for (int f = 0; f < p.mesh.num_faces(); ++f)
    if (p.mesh.face(f).is_boundary() && near(p.mesh.face_midpoint(f).y(), 1.0)) p.bc.traction_faces[f] = true;
  p.bc.traction = [](const Vec2&, double) { return Vec2(0.0, -1.0); };
  p.bc.flux = [](const Vec2&, double) { return 0.0; };
  return p;
}

CantileverResult run_cantilever(const PolyMesh& mesh, double dt, bool stabilized, const SolverOptions& solver) {
  Simulator sim(cantilever_problem(mesh, stabilized), dt, solver);
  CantileverResult r;
  r.state = sim.step(sim.zero_state());
  r.cells = mesh.num_cells();
  r.unknowns = sim.condensed().size();
  r.iterations = sim.last_report().iterations;
  r.relative_residual = sim.last_report().relative_residual;
  r.indicator = checkerboard_indicator(sim.mesh(), r.state.p);
  return r;
}

double checkerboard_indicator(const PolyMesh& mesh, const Eigen::VectorXd& p) {
  if (p.size() != mesh.num_cells()) throw Error(ErrorKind::invalid_argument, "pressure does not match the mesh");
  double jumps = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.is_boundary()) continue;
    const double d = p(face.cells[0]) - p(face.cells[1]);
    jumps += upsilon(mesh, f) * d * d;
  }
  double norm = 0.0;
  for (int k = 0; k < mesh.num_cells(); ++k) norm += cell_geometry(mesh, k).area * p(k) * p(k);
  return norm > 0.0 ? jumps / norm : 0.0;
}

void run_parallel(int count, int workers, const std::function<void(int)>& job) {
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int worker_limit_from_env() {
  const char* env = std::getenv("POROMECH_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

}  // namespace poromech
