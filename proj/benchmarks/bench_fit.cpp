#include <benchmark/benchmark.h>

#include "nysreg/aggregation.hpp"
#include "nysreg/data.hpp"
#include "nysreg/graph.hpp"
#include "nysreg/kernels.hpp"
#include "nysreg/modelsel.hpp"
#include "nysreg/solver.hpp"

#include <memory>

using namespace nysreg;

namespace {

struct Problem {
  Dataset data;
  RegularizationConfig config;
  KernelSpec kernel = KernelSpec::gaussian(1.0);
};

Problem make_problem(std::size_t n) {
  SyntheticTarget target;
  target.anchors = uniform_points(8, 3, 5);
  target.amplitudes = Vector::LinSpaced(8, -1.0, 1.0);
  target.kernel = KernelSpec::gaussian(4.0);
  target.noise_sigma = 0.1;
  Problem p;
  p.data = gen_synthetic(target, n / 2, n, 11).data;
  p.config.lambda0 = 1e-3;
  p.config.graph_penalties.push_back(
      {1e-2, std::make_shared<const GraphPenalty>(laplacian(exp_weights(p.data.x, 0.05)))});
  return p;
}

}  // namespace

static void BM_FitFull(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_full(p.data, p.kernel, p.config));
  }
  state.SetComplexityN(state.range(0));
}

static void BM_FitNystrom(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = static_cast<std::size_t>(state.range(1));
  const Problem p = make_problem(n);
  const IndexList lm = select_landmarks(n, s, LandmarkMode::uniform, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_nystrom(p.data, lm, p.kernel, p.config));
  }
}

static void BM_Aggregate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Problem p = make_problem(n);
  std::vector<NystromModel> members;
  for (std::size_t s : {10, 50, 250}) {
    members.push_back(fit_nystrom(p.data, select_landmarks(n, s, LandmarkMode::uniform, s), p.kernel, p.config));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(aggregate_lfs(members, p.data));
  }
}

static void BM_EffectiveDimension(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)));
  const Matrix k = gram(p.kernel, p.data.x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(effective_dimension(k, 1e-3));
  }
}

static void BM_Laplacian(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(laplacian(exp_weights(p.data.x, 0.05)));
  }
}

BENCHMARK(BM_FitFull)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitNystrom)
    ->Args({2000, 10})
    ->Args({2000, 50})
    ->Args({2000, 250})
    ->Args({500, 50})
    ->Args({1000, 50})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Aggregate)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EffectiveDimension)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Laplacian)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
