// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "rankfield/batch.hpp"
#include "rankfield/pointproc.hpp"

using namespace rankfield;

namespace {

const Grid kGrid(0, 0.5, 100);
const int kDims[] = {0, 1};

PointPattern source(std::size_t i) { return gen_binomial(100, Window::unit(2), 1000 + i); }

std::vector<RankFunction> functions(std::size_t n) {
  std::vector<RankFunction> out;
  for (const auto& set : serial::rank_functions(source, n, kDims, kGrid)) out.push_back(set[1]);
  return out;
}

void BM_RankFunctions(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto sets = jobs == 1 ? serial::rank_functions(source, 64, kDims, kGrid)
                          : parallel::rank_functions(source, 64, kDims, kGrid, jobs);
    benchmark::DoNotOptimize(sets);
  }
  state.SetItemsProcessed(state.iterations() * 64);
}

void BM_GramMatrix(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  const auto fs = functions(100);
  const Quadrature quad(kGrid, WeightFunction::indicator());
  for (auto _ : state) {
    auto m = jobs == 1 ? serial::gram_matrix(fs, quad) : parallel::gram_matrix(fs, quad, jobs);
    benchmark::DoNotOptimize(m);
  }
}

void BM_Distances(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  const auto fs = functions(200);
  const Quadrature quad(kGrid, WeightFunction::indicator());
  for (auto _ : state) {
    auto d = jobs == 1 ? serial::distances_squared(fs, fs[0], quad)
                       : parallel::distances_squared(fs, fs[0], quad, jobs);
    benchmark::DoNotOptimize(d);
  }
}

}  // namespace

// Argument: 1 runs the serial reference, anything else the parallel kernel
// with that many threads (0 = OpenMP default).
BENCHMARK(BM_RankFunctions)->Arg(1)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramMatrix)->Arg(1)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Distances)->Arg(1)->Arg(0)->Arg(4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
