#include <benchmark/benchmark.h>

#include "eigx/assembly.hpp"

using namespace eigx;

namespace {

void BM_Refine(benchmark::State& state) {
  const Mesh coarse = build_level(Domain::Square2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(refine_uniform(coarse));
  state.counters["triangles"] = 4.0 * coarse.num_triangles();
}
BENCHMARK(BM_Refine)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

template <SpaceKind K>
void BM_Stiffness(benchmark::State& state) {
  const FeSpace s(build_level(Domain::Square2, static_cast<int>(state.range(0))), K);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(s));
  state.counters["dofs"] = s.n_dofs();
}
BENCHMARK(BM_Stiffness<SpaceKind::CR>)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Stiffness<SpaceKind::ECR>)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Stiffness<SpaceKind::P3>)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);

template <SpaceKind K>
void BM_Mass(benchmark::State& state) {
  const FeSpace s(build_level(Domain::Square2, static_cast<int>(state.range(0))), K);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_mass(s));
  state.counters["dofs"] = s.n_dofs();
}
BENCHMARK(BM_Mass<SpaceKind::CR>)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Mass<SpaceKind::ECR>)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

}  // namespace
