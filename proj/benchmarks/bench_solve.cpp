#include <benchmark/benchmark.h>

#include "eigx/problem.hpp"
#include "eigx/solve.hpp"

using namespace eigx;

namespace {

// args: level, k
template <SpaceKind K, EigenMethod M>
void BM_Eigs(benchmark::State& state) {
  const FeSpace s(build_level(Domain::Square2, static_cast<int>(state.range(0))), K);
  EigenOptions o;
  o.k = static_cast<int>(state.range(1));
  o.method = M;
  o.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(solve_eigenproblem(s, o));
  state.counters["free_dofs"] = s.n_free();
}
// dense and shift-invert side by side where both are affordable
BENCHMARK(BM_Eigs<SpaceKind::CR, EigenMethod::Dense>)->Args({4, 4})->Args({5, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Eigs<SpaceKind::CR, EigenMethod::ShiftInvert>)
    ->Args({4, 4})->Args({5, 4})->Args({6, 4})->Args({7, 4})->Args({7, 8})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Eigs<SpaceKind::ECR, EigenMethod::ShiftInvert>)->Args({5, 4})->Args({6, 4})->Args({7, 4})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Eigs<SpaceKind::P3, EigenMethod::ShiftInvert>)->Args({4, 4})->Args({5, 4})->Args({6, 4})
    ->Unit(benchmark::kMillisecond);

void BM_LinearSolve(benchmark::State& state) {
  const FeSpace s(build_level(Domain::Square2, static_cast<int>(state.range(0))), SpaceKind::CR);
  const SparseSymMatrix a = assemble_stiffness(s);
  const Vector rhs = Vector::Ones(a.rows());
  for (auto _ : state) benchmark::DoNotOptimize(solve_sym_linear(a, rhs));
  state.counters["dofs"] = a.rows();
}
BENCHMARK(BM_LinearSolve)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

}  // namespace
