#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <poromech/poromech.hpp>

namespace poromech::cli {
namespace {

std::filesystem::path output_dir(const RunConfig& c) {
  std::filesystem::path dir(c.output);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + c.output + "': " + ec.message());
  return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

PolyMesh load_mesh(const RunConfig& c, int level) {
  if (!c.mesh_file.empty()) return read_mesh_file(c.mesh_file);
  return build_family_mesh(parse_mesh_family(c.mesh), level, c.seed);
}

SolverOptions solver_options(const RunConfig& c) {
  SolverOptions s;
  s.kind = parse_solver_kind(c.solver);
  s.gmres.rtol = c.rtol;
  s.gmres.maxit = c.maxit;
  return s;
}

int workers(const RunConfig& c) { return c.workers > 0 ? c.workers : worker_limit_from_env(); }

void apply_material(const RunConfig& c, Material& m) {
  if (c.G) m.G = *c.G;
  if (c.lambda) m.lambda = *c.lambda;
  if (c.alpha) m.alpha = *c.alpha;
  if (c.storage) m.storage = *c.storage;
  if (c.kappa) m.kappa = *c.kappa * Mat2::Identity();
}

ManufacturedSolution manufactured_exact(const RunConfig& c) {
  ManufacturedSolution e;
  if (c.G) e.G = *c.G;
  if (c.lambda) e.lambda = *c.lambda;
  if (c.alpha) e.alpha = *c.alpha;
  if (c.storage) e.storage = *c.storage;
  if (c.kappa) e.kappa = *c.kappa;
  return e;
}

MandelParams mandel_params(const RunConfig& c) {
  MandelParams p;
  if (c.G) p.G = *c.G;
  if (c.lambda) p.lambda = *c.lambda;
  if (c.alpha) p.alpha = *c.alpha;
  if (c.storage) p.storage = *c.storage;
  if (c.kappa) p.kappa = *c.kappa;
  return p;
}

void write_rows(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows,
                const std::vector<std::string>& status, bool in_time) {
  std::ofstream out = open_output(path);
  CsvWriter csv(out, {"level", "cells", "unknowns", "h", "dt", "steps", "e_p", "e_u", "e_sigma", "rate_p", "rate_u",
                      "rate_sigma", "status"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConvergenceRow& r = rows[i];
    csv << r.level << r.cells << r.unknowns << r.h << r.dt << r.steps << r.e_p << r.e_u << r.e_sigma;
    const bool have_rate = i > 0 && status[i] == "ok" && status[i - 1] == "ok";
    if (have_rate) {
      const std::vector<ConvergenceRow> pair(rows.begin() + i - 1, rows.begin() + i + 1);
      const Rates rate = in_time ? rates_in_dt(pair) : rates_in_h(pair);
      csv << rate.e_p << rate.e_u << rate.e_sigma;
    } else {
      csv << std::string() << std::string() << std::string();
    }
    csv << status[i];
    csv.end_row();
  }
}

}  // namespace

void validate(const RunConfig& c) {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(c.dt, "dt");
  positive(c.dt0, "dt0");
  positive(c.rtol, "rtol");
  positive(c.dt_over_tc, "dt-over-tc");
  if (c.T < 0.0) throw ConfigError("T must be non-negative");
  if (c.steps < 1) throw ConfigError("steps must be at least 1");
  if (c.maxit < 1) throw ConfigError("maxit must be at least 1");
  if (c.level < 0 || c.first_level < 0) throw ConfigError("levels are non-negative");
  if (c.levels < 1 || c.count < 1) throw ConfigError("a study needs at least one case");
  if (c.snapshot_every < 0) throw ConfigError("snapshot-every must be non-negative");
  if (c.problem != "cantilever" && c.problem != "manufactured" && c.problem != "mandel")
    throw ConfigError("unknown problem '" + c.problem + "' (expected cantilever, manufactured or mandel)");
  if (c.mode != "space" && c.mode != "time") throw ConfigError("mode must be 'space' or 'time'");
  for (double t : c.times) positive(t, "Mandel times");
  for (double t : c.dts) positive(t, "dts");
  try {
    parse_mesh_family(c.mesh);
    parse_solver_kind(c.solver);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (c.G) positive(*c.G, "G");
  if (c.kappa) positive(*c.kappa, "kappa");
  if (c.lambda && *c.lambda < 0.0) throw ConfigError("lambda must be non-negative");
  if (c.storage && *c.storage < 0.0) throw ConfigError("storage must be non-negative");
  if (c.alpha && (*c.alpha < 0.0 || *c.alpha > 1.0)) throw ConfigError("alpha must lie in [0, 1]");
}

int cmd_mesh(const RunConfig& c) {
  const PolyMesh mesh = load_mesh(c, c.level);
  const auto dir = output_dir(c);
  {
    std::ofstream out = open_output(dir / "mesh.txt");
    write_mesh(out, mesh);
  }
  write_vtk_file((dir / "mesh.vtk").string(), mesh, Eigen::VectorXd::Zero(mesh.num_cells()),
                 Eigen::VectorXd::Zero(2 * mesh.num_vertices()), "mesh");
  if (c.stabilize) {
    std::ofstream out = open_output(dir / "macro_elements.csv");
    write_partition_csv(out, build_macro_elements(mesh));
  }
  std::printf("vertices %d cells %d faces %d unknowns %d h %s\n", mesh.num_vertices(), mesh.num_cells(),
              mesh.num_faces(), mesh.condensed_unknowns(), format_double(mesh_size(compute_geometry(mesh))).c_str());
  return 0;
}

int cmd_run(const RunConfig& c) {
  PolyMesh mesh = load_mesh(c, c.level);
  Problem problem;
  State state;
  double dt = c.dt;
  std::optional<ManufacturedSolution> exact;
  Eigen::VectorXd p0;
  if (c.problem == "cantilever") {
    if (!c.mesh_file.empty()) mesh.tag_boundary([](const Vec2&) { return false; });
    problem = cantilever_problem(std::move(mesh), c.stabilize);
    apply_material(c, problem.material);
  } else if (c.problem == "manufactured") {
    exact = manufactured_exact(c);
    problem = manufactured_problem(std::move(mesh), *exact, c.stabilize);
  } else {
    MandelSetup setup = mandel_setup(std::move(mesh), mandel_params(c), c.dt_over_tc);
    problem = std::move(setup.problem);
    problem.stabilized = c.stabilize;
    dt = setup.dt;
    p0 = setup.p0;
  }

  Simulator sim(std::move(problem), dt, solver_options(c));
  if (exact) {
    p0.resize(sim.mesh().num_cells());
    for (int k = 0; k < sim.mesh().num_cells(); ++k)
      p0(k) = cell_average(sim.geometry()[k], [&](const Vec2& x) { return exact->pressure(x, 0.0); });
  }
  state = p0.size() ? sim.initial_state(p0, 0.0) : sim.zero_state();

  const int steps = c.T > 0.0 ? static_cast<int>(std::lround(c.T / dt)) : c.steps;
  if (steps < 1) throw ConfigError("T / dt gives no time steps");
  const auto dir = output_dir(c);
  std::ofstream report = open_output(dir / "report.csv");
  CsvWriter csv(report, {"step", "time", "iterations", "relative_residual", "converged"});
  const auto snapshot = [&](const State& s) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%05d.vtk", c.problem.c_str(), s.step);
    write_vtk_file((dir / name).string(), sim.mesh(), s.p, s.u, c.problem);
  };
  if (c.snapshot_every > 0) snapshot(state);
  for (int n = 1; n <= steps; ++n) {
    state = sim.step(state);
    const StepReport& r = sim.last_report();
    csv << r.step << r.time << r.iterations << r.relative_residual << (r.converged ? 1 : 0);
    csv.end_row();
    if (c.snapshot_every > 0 && (n % c.snapshot_every == 0 || n == steps)) snapshot(state);
  }
  std::printf("%s: %d steps to t = %s, unknowns %d\n", c.problem.c_str(), steps, format_double(state.time).c_str(),
              sim.condensed().size());
  return 0;
}

int cmd_converge(const RunConfig& c) {
  const SolverOptions solver = solver_options(c);
  const bool in_time = c.mode == "time";
  const int n = in_time ? c.count : c.levels;
  const double T = c.T > 0.0 ? c.T : 1.0;
  std::vector<ConvergenceRow> rows(n);
  std::vector<std::string> status(n, "ok");
  std::optional<PolyMesh> fixed;
  if (in_time) fixed = load_mesh(c, c.level);
  else if (!c.mesh_file.empty()) throw ConfigError("a space ladder needs a mesh family, not a mesh file");

  // A failing case is recorded and the ladder continues.
  run_parallel(n, workers(c), [&](int i) {
    const int level = in_time ? c.level : c.first_level + i;
    const double dt = in_time ? c.dt0 / std::pow(2.0, i) : c.dt0 / std::pow(2.0, level - c.first_level);
    try {
      const PolyMesh mesh = in_time ? *fixed : build_family_mesh(parse_mesh_family(c.mesh), level, c.seed);
      rows[i] = run_manufactured(mesh, dt, T, solver, c.stabilize);
      rows[i].h = mesh_size(compute_geometry(mesh));
    } catch (const Error& e) {
      status[i] = std::string("failed: ") + to_string(e.kind());
    }
    rows[i].level = level;
    rows[i].dt = dt;
  });
  write_rows(output_dir(c) / "convergence.csv", rows, status, in_time);
  int failed = 0;
  for (const std::string& s : status) failed += s != "ok";
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::printf("level %d dt %s e_p %s e_u %s e_sigma %s %s\n", rows[i].level, format_double(rows[i].dt).c_str(),
                format_double(rows[i].e_p).c_str(), format_double(rows[i].e_u).c_str(),
                format_double(rows[i].e_sigma).c_str(), status[i].c_str());
  return failed ? 1 : 0;
}

int cmd_mandel(const RunConfig& c) {
  const MandelResult r =
      run_mandel(load_mesh(c, c.level), c.times, mandel_params(c), c.dt_over_tc, solver_options(c));
  const auto dir = output_dir(c);
  std::ofstream prof = open_output(dir / "mandel_profiles.csv");
  std::ofstream summ = open_output(dir / "mandel_summary.csv");
  CsvWriter p(prof, {"time_over_tc", "x", "p_h", "p_exact"});
  CsvWriter s(summ, {"time_over_tc", "max_relative_error"});
  for (const MandelProfile& m : r.profiles) {
    const double t = m.time / r.characteristic_time;
    for (std::size_t i = 0; i < m.x.size(); ++i) {
      p << t << m.x[i] << m.p_h[i] << m.p_exact[i];
      p.end_row();
    }
    s << t << m.max_relative_error;
    s.end_row();
    std::printf("t/Tc %s max relative error %s\n", format_double(t).c_str(), format_double(m.max_relative_error).c_str());
  }
  return 0;
}

int cmd_cantilever(const RunConfig& c) {
  const auto dir = output_dir(c);
  std::ofstream out = open_output(dir / "cantilever.csv");
  CsvWriter csv(out, {"family", "level", "stabilized", "cells", "unknowns", "iterations", "relative_residual",
                      "indicator"});
  const int count = c.mesh_file.empty() ? c.levels : 1;
  for (int i = 0; i < count; ++i) {
    const int level = c.first_level + i;
    PolyMesh mesh = load_mesh(c, level);
    if (!c.mesh_file.empty()) mesh.tag_boundary([](const Vec2&) { return false; });
    std::vector<bool> variants = {c.stabilize};
    if (c.both) variants = {false, true};
    for (bool stab : variants) {
      const CantileverResult r = run_cantilever(mesh, c.dt, stab, solver_options(c));
      const std::string family = c.mesh_file.empty() ? c.mesh : "file";
      csv << family << level << (stab ? 1 : 0) << r.cells << r.unknowns << r.iterations << r.relative_residual
          << r.indicator;
      csv.end_row();
      std::printf("%s level %d stabilized %d iterations %d indicator %s\n", family.c_str(), level, stab ? 1 : 0,
                  r.iterations, format_double(r.indicator).c_str());
      if (c.vtk) {
        char name[64];
        std::snprintf(name, sizeof name, "cantilever_l%d_s%d.vtk", level, stab ? 1 : 0);
        write_vtk_file((dir / name).string(), mesh, r.state.p, r.state.u, "cantilever");
      }
    }
  }
  return 0;
}

int cmd_solver_bench(const RunConfig& c) {
  if (c.solver != "gmres") throw ConfigError("solver-bench measures the GMRES solver");
  const auto dir = output_dir(c);
  std::ofstream out = open_output(dir / "solver_report.csv");
  CsvWriter csv(out, {"level", "dt", "stabilized", "unknowns", "iterations", "relative_residual"});
  for (int i = 0; i < c.levels; ++i) {
    const int level = c.first_level + i;
    const PolyMesh mesh = load_mesh(c, level);
    for (double dt : c.dts)
      for (bool stab : {false, true}) {
        const CantileverResult r = run_cantilever(mesh, dt, stab, solver_options(c));
        csv << level << dt << (stab ? 1 : 0) << r.unknowns << r.iterations << r.relative_residual;
        csv.end_row();
        std::printf("level %d dt %s stabilized %d iterations %d\n", level, format_double(dt).c_str(), stab ? 1 : 0,
                    r.iterations);
      }
  }
  return 0;
}

}  // namespace poromech::cli
