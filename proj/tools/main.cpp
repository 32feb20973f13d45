#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <type_traits>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <poromech/error.hpp>

#include "commands.hpp"

namespace {

using poromech::cli::ConfigError;
using poromech::cli::RunConfig;
using json = nlohmann::json;

// Every option is reachable both as a flag and as a key of the JSON config
// file. Values from the file are applied only where the flag was not given.
class Bindings {
 public:
  explicit Bindings(CLI::App& app) : app_(app) {}

  template <class T>
  void add(const std::string& key, T& field, const std::string& help) {
    CLI::Option* opt = app_.add_option("--" + key, field, help);
    if constexpr (!std::is_same_v<T, std::vector<double>>) opt->capture_default_str();
    entries_[key] = {opt, [&field](const json& v) { field = v.get<T>(); }};
  }

  void add_optional(const std::string& key, std::optional<double>& field, const std::string& help) {
    CLI::Option* opt = app_.add_option("--" + key, field, help);
    entries_[key] = {opt, [&field](const json& v) { field = v.get<double>(); }};
  }

  void add_flag(const std::string& key, bool& field, const std::string& help) {
    CLI::Option* opt = app_.add_flag("--" + key + ",!--no-" + key, field, help);
    entries_[key] = {opt, [&field](const json& v) { field = v.get<bool>(); }};
  }

  void apply(const std::string& path) const {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config file '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
    for (const auto& [key, value] : doc.items()) {
      const auto it = entries_.find(key);
      if (it == entries_.end()) throw ConfigError("unknown config key '" + key + "' for '" + app_.get_name() + "'");
      if (it->second.option->count() > 0) continue;
      try {
        it->second.set(value);
      } catch (const json::exception& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
      }
    }
  }

 private:
  struct Entry {
    CLI::Option* option;
    std::function<void(const json&)> set;
  };
  CLI::App& app_;
  std::map<std::string, Entry> entries_;
};

struct Command {
  CLI::App* app;
  std::unique_ptr<Bindings> bindings;
  std::function<int(const RunConfig&)> run;
};

void add_mesh_options(Bindings& b, RunConfig& c) {
  b.add("mesh", c.mesh, "mesh family: cartesian, skewed, hybrid, voronoi1, voronoi20");
  b.add("level", c.level, "refinement level");
  b.add("mesh-file", c.mesh_file, "read the mesh from a file instead of generating it");
  b.add("seed", c.seed, "seed for randomized mesh generators");
}

void add_solver_options(Bindings& b, RunConfig& c) {
  b.add("solver", c.solver, "gmres or direct (converge defaults to direct)");
  b.add("rtol", c.rtol, "GMRES relative tolerance");
  b.add("maxit", c.maxit, "GMRES iteration cap");
}

void add_material_options(Bindings& b, RunConfig& c) {
  b.add_optional("G", c.G, "shear modulus override");
  b.add_optional("lambda", c.lambda, "Lame parameter override");
  b.add_optional("alpha", c.alpha, "Biot coefficient override");
  b.add_optional("storage", c.storage, "specific storage override");
  b.add_optional("kappa", c.kappa, "isotropic permeability override");
}

void add_output(Bindings& b, RunConfig& c) { b.add("output", c.output, "output directory"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poromechanics simulator: VEM mechanics, mimetic flow, fixed-stress preconditioned GMRES."};
  app.require_subcommand(1);
  RunConfig config;
  std::string config_path;
  std::vector<Command> commands;

  const auto make = [&](const std::string& name, const std::string& help,
                        std::function<int(const RunConfig&)> run) -> Bindings& {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    commands.push_back({sub, std::make_unique<Bindings>(*sub), std::move(run)});
    return *commands.back().bindings;
  };

  {
    Bindings& b = make("mesh", "generate or read a mesh and write it with its VTK view", poromech::cli::cmd_mesh);
    add_mesh_options(b, config);
    add_output(b, config);
    b.add_flag("stabilize", config.stabilize, "also write the macro-element partition");
  }
  {
    Bindings& b = make("run", "time-step one problem, writing VTK snapshots and a solver report",
                       poromech::cli::cmd_run);
    b.add("problem", config.problem, "cantilever, manufactured or mandel");
    add_mesh_options(b, config);
    b.add("dt", config.dt, "time step (Mandel uses --dt-over-tc)");
    b.add("dt-over-tc", config.dt_over_tc, "Mandel time step in units of the characteristic time");
    b.add("T", config.T, "final time; overrides --steps when positive");
    b.add("steps", config.steps, "number of time steps");
    b.add_flag("stabilize", config.stabilize, "pressure-jump stabilization");
    b.add("snapshot-every", config.snapshot_every, "VTK snapshot interval in steps, 0 for none");
    add_solver_options(b, config);
    add_material_options(b, config);
    add_output(b, config);
  }
  {
    Bindings& b = make("converge", "manufactured-solution refinement study", poromech::cli::cmd_converge);
    add_mesh_options(b, config);
    b.add("mode", config.mode, "space: refine h and dt together; time: halve dt on a fixed mesh");
    b.add("levels", config.levels, "ladder length in space mode");
    b.add("first-level", config.first_level, "first level of the ladder");
    b.add("count", config.count, "number of time steps sizes in time mode");
    b.add("dt0", config.dt0, "time step of the first case");
    b.add("T", config.T, "final time (default 1)");
    b.add_flag("stabilize", config.stabilize, "pressure-jump stabilization");
    b.add("threads", config.workers, "parallel cases (default POROMECH_THREADS or 1)");
    add_solver_options(b, config);
    add_material_options(b, config);
    add_output(b, config);
  }
  {
    Bindings& b = make("mandel", "Mandel benchmark pressure profiles", poromech::cli::cmd_mandel);
    add_mesh_options(b, config);
    b.add("times", config.times, "sample times in units of the characteristic time");
    b.add("dt-over-tc", config.dt_over_tc, "time step in units of the characteristic time");
    add_solver_options(b, config);
    add_material_options(b, config);
    add_output(b, config);
  }
  {
    Bindings& b = make("cantilever", "cantilever checkerboard study", poromech::cli::cmd_cantilever);
    add_mesh_options(b, config);
    b.add("levels", config.levels, "number of levels");
    b.add("first-level", config.first_level, "first level");
    b.add("dt", config.dt, "time step");
    b.add_flag("stabilize", config.stabilize, "pressure-jump stabilization");
    b.add_flag("both", config.both, "run with and without stabilization");
    b.add_flag("vtk", config.vtk, "write a VTK file per case");
    add_solver_options(b, config);
    add_output(b, config);
  }
  {
    Bindings& b = make("solver-bench", "GMRES iteration counts on the cantilever", poromech::cli::cmd_solver_bench);
    add_mesh_options(b, config);
    b.add("levels", config.levels, "number of levels");
    b.add("first-level", config.first_level, "first level");
    b.add("dts", config.dts, "time steps");
    add_solver_options(b, config);
    add_output(b, config);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  for (Command& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      // Studies compare discretization errors, so they default to the direct solver.
      if (cmd.app->get_name() == "converge" && cmd.app->get_option("--solver")->count() == 0) config.solver = "direct";
      if (!config_path.empty()) cmd.bindings->apply(config_path);
      poromech::cli::validate(config);
      return cmd.run(config);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const poromech::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      const bool input = e.kind() == poromech::ErrorKind::parse_error ||
                         e.kind() == poromech::ErrorKind::invalid_argument ||
                         e.kind() == poromech::ErrorKind::degenerate_mesh ||
                         e.kind() == poromech::ErrorKind::degenerate_cell;
      return input ? 2 : 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
