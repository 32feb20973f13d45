#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace poromech::cli {

/// Bad user input: unknown names, out-of-range values, unreadable files.
/// Mapped to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string problem = "cantilever";
  std::string mesh = "cartesian";
  int level = 0;
  std::string mesh_file;
  std::uint64_t seed = 202101;

  double dt = 1e-5;
  double T = 0.0;  ///< final time; 0 means use `steps`
  int steps = 1;
  bool stabilize = false;

  std::string solver = "gmres";
  double rtol = 1e-6;
  int maxit = 500;

  std::optional<double> G, lambda, alpha, storage, kappa;

  std::string output = ".";
  int snapshot_every = 1;
  int workers = 0;  ///< 0 means POROMECH_THREADS

  // Studies.
  std::string mode = "space";
  int levels = 3;
  int first_level = 0;
  double dt0 = 0.1;
  int count = 3;
  std::vector<double> times = {0.05, 0.1, 0.2, 0.5, 1.0};
  double dt_over_tc = 1e-4;
  std::vector<double> dts = {1e-5, 0.1};
  bool both = false;
  bool vtk = false;
};

/// Throws ConfigError on values that no command accepts.
void validate(const RunConfig& c);

int cmd_mesh(const RunConfig& c);
int cmd_run(const RunConfig& c);
int cmd_converge(const RunConfig& c);
int cmd_mandel(const RunConfig& c);
int cmd_cantilever(const RunConfig& c);
int cmd_solver_bench(const RunConfig& c);

}  // namespace poromech::cli
