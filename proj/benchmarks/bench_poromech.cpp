#include <random>

#include <benchmark/benchmark.h>

#include <poromech/poromech.hpp>

#include "test_support.hpp"

namespace pm = poromech;

namespace {

std::vector<pm::CellGeometry> polygons(int n_vertices) {
  std::mt19937_64 rng(5);
  std::vector<pm::CellGeometry> out;
  for (int i = 0; i < 64; ++i) out.push_back(pm::polygon_geometry(pm::testing::random_convex_polygon(rng, n_vertices)));
  return out;
}

void BM_LocalVem(benchmark::State& state) {
  const auto cells = polygons(static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(pm::build_local_vem(cells[i++ % cells.size()], 1.0, 2.0));
}
BENCHMARK(BM_LocalVem)->Arg(4)->Arg(6)->Arg(10);

void BM_LocalMimetic(benchmark::State& state) {
  const auto cells = polygons(static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(pm::build_local_mimetic(cells[i++ % cells.size()], pm::Mat2::Identity()));
}
BENCHMARK(BM_LocalMimetic)->Arg(4)->Arg(6)->Arg(10);

void BM_AssembleAndCondense(benchmark::State& state) {
  const pm::Problem p =
      pm::cantilever_problem(pm::build_family_mesh(pm::MeshFamily::voronoi20, static_cast<int>(state.range(0))), true);
  const auto geometry = pm::compute_geometry(p.mesh);
  const pm::MacroPartition part = pm::build_macro_elements(p.mesh);
  for (auto _ : state) {
    const pm::BlockSystem4 blocks = pm::assemble_blocks(p.mesh, geometry, p.material, p.bc, p.loads, &part, 1e-5, 1e-5);
    benchmark::DoNotOptimize(pm::static_condense(blocks, 1e-5));
  }
}
BENCHMARK(BM_AssembleAndCondense)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_PreconditionerBuild(benchmark::State& state) {
  pm::Simulator sim(pm::cantilever_problem(pm::build_cartesian(10 << state.range(0), 10 << state.range(0)), true),
                    1e-5);
  const pm::CondensedSystem& cs = sim.condensed();
  for (auto _ : state)
    benchmark::DoNotOptimize(pm::BlockTriangularPreconditioner(sim.eliminated().matrix, cs.n_u, cs.n_p, cs.n_pi));
}
BENCHMARK(BM_PreconditionerBuild)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_CantileverStep(benchmark::State& state) {
  const pm::SolverOptions options{state.range(1) ? pm::SolverKind::direct : pm::SolverKind::gmres, {}};
  pm::Simulator sim(pm::cantilever_problem(pm::build_cartesian(10 << state.range(0), 10 << state.range(0)), true),
                    1e-5, options);
  const pm::State s0 = sim.zero_state();
  sim.step(s0);  // factorizations happen on first use
  for (auto _ : state) benchmark::DoNotOptimize(sim.step(s0));
  state.counters["iterations"] = sim.last_report().iterations;
}
BENCHMARK(BM_CantileverStep)
    ->ArgsProduct({{0, 1, 2}, {0, 1}})
    ->ArgNames({"level", "direct"})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
