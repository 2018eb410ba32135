#include <benchmark/benchmark.h>

#include "rlm/experiment.hpp"

using namespace rlm;

namespace {

std::shared_ptr<const Mesh> banded_mesh(int n, const std::vector<Inclusion>& inclusions,
                                        int passes) {
  Mesh mesh = generate_rect_mesh(-1, 1, -1, 1, n);
  for (int p = 0; p < passes; ++p)
    mesh = refine_local(mesh,
                        [&](const Mesh& m, int t) { return near_any_circle(m, t, inclusions, 1.0); });
  return std::make_shared<Mesh>(std::move(mesh));
}

std::vector<Inclusion> grid_inclusions(int k) {
  return place_structured(RectDomain{-1, 1, -1, 1}, k, k, 0.05, 0.1, 2).inclusions;
}

}  // namespace

static void BM_RefineUniform(benchmark::State& state) {
  const Mesh base = generate_rect_mesh(-1, 1, -1, 1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Mesh fine = refine_uniform(base);
    benchmark::DoNotOptimize(fine.n_triangles());
  }
}
BENCHMARK(BM_RefineUniform)->Arg(32)->Arg(64);

static void BM_RefineLocalBand(benchmark::State& state) {
  const Mesh base = generate_rect_mesh(-1, 1, -1, 1, static_cast<int>(state.range(0)));
  const auto inclusions = grid_inclusions(5);
  for (auto _ : state) {
    Mesh fine = refine_local(base, [&](const Mesh& m, int t) {
      return near_any_circle(m, t, inclusions, 1.0);
    });
    benchmark::DoNotOptimize(fine.n_triangles());
  }
}
BENCHMARK(BM_RefineLocalBand)->Arg(48);

static void BM_AssembleStiffness(benchmark::State& state) {
  const FeSpace space = build_space(
      std::make_shared<Mesh>(generate_rect_mesh(-1, 1, -1, 1, static_cast<int>(state.range(0)))));
  for (auto _ : state) {
    SymSparseMatrix A = assemble_stiffness(space, 1.0, 1.0);
    benchmark::DoNotOptimize(A.nnz());
  }
  state.SetItemsProcessed(state.iterations() * space.mesh->n_triangles());
}
BENCHMARK(BM_AssembleStiffness)->Arg(32)->Arg(64)->Arg(128);

static void BM_AssembleCoupling(benchmark::State& state) {
  const auto inclusions = grid_inclusions(static_cast<int>(state.range(0)));
  const FeSpace space = build_space(banded_mesh(48, inclusions, 2));
  for (auto _ : state) {
    CouplingBlock block = assemble_coupling(space, inclusions);
    benchmark::DoNotOptimize(block.n_rows());
  }
  state.SetItemsProcessed(state.iterations() * inclusions.size());
}
BENCHMARK(BM_AssembleCoupling)->Arg(3)->Arg(7);

static void BM_SaddleSolve(benchmark::State& state) {
  const auto inclusions = grid_inclusions(static_cast<int>(state.range(0)));
  const FeSpace space0 = build_space(banded_mesh(48, inclusions, 2));
  const SymSparseMatrix A = assemble_stiffness(space0, 1.0, 1.0);
  const FeSpace space = apply_dirichlet(space0, boundary_function(BcSpec{"compression", 0.1}));
  const CouplingBlock coupling = assemble_coupling(space, inclusions);
  const SaddleSystem sys = build_saddle_system(space, A, coupling, Field(space.n_dofs(), 0.0));
  for (auto _ : state) {
    SaddleSolution sol = solve_saddle(sys);
    benchmark::DoNotOptimize(sol.report.outer_iterations);
  }
}
BENCHMARK(BM_SaddleSolve)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_PointLocation(benchmark::State& state) {
  const auto inclusions = grid_inclusions(5);
  const FeSpace space = build_space(banded_mesh(64, inclusions, 2));
  Rng rng(7);
  std::vector<Vec2> queries(1024);
  for (auto& q : queries) q = {rng.uniform(-0.99, 0.99), rng.uniform(-0.99, 0.99)};
  for (auto _ : state)
    for (const auto& q : queries) benchmark::DoNotOptimize(space.locator->locate(q).triangle);
  state.SetItemsProcessed(state.iterations() * queries.size());
}
BENCHMARK(BM_PointLocation);

BENCHMARK_MAIN();
