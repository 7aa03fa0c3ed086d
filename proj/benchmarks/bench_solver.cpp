#include <benchmark/benchmark.h>

#include "dga/analysis.hpp"
#include "dga/harness.hpp"
#include "dga/scenarios.hpp"
#include "dga/solver.hpp"

namespace {

using namespace dga;

const CoupledProblem& dispatch() {
  static CoupledProblem problem = make_dispatch118(10);
  return problem;
}

void BM_round_dga(benchmark::State& state) {
  const auto& problem = dispatch();
  auto hp = default_params(problem);
  auto s = init(problem);
  StepOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    step(s, problem, hp, opts);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_round_dga)->Arg(1)->Arg(4);

void BM_round_exact_mm(benchmark::State& state) {
  const auto& problem = dispatch();
  auto hp = default_params(problem);
  auto s = init(problem);
  StepOptions opts;
  opts.variant = Variant::exact_mm;
  for (auto _ : state) {
    step(s, problem, hp, opts);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_round_exact_mm);

void BM_exchange(benchmark::State& state) {
  const auto& problem = dispatch();
  Vec y = Vec::LinSpaced(118, -1.0, 1.0);
  for (auto _ : state) {
    auto [mailbox, t] = exchange(problem.graph(), y, 1);
    benchmark::DoNotOptimize(t.data());
  }
}
BENCHMARK(BM_exchange);

void BM_omega_norm(benchmark::State& state) {
  const auto& problem = dispatch();
  auto hp = default_params(problem);
  OmegaMetric metric(problem, hp);
  Vec vx = Vec::LinSpaced(118, -1.0, 1.0);
  Vec vy = Vec::LinSpaced(118, 0.5, 2.0);
  Vec vl = Vec::LinSpaced(118, -2.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(metric.norm_sq(vx, vy, vl));
}
BENCHMARK(BM_omega_norm);

}  // namespace

BENCHMARK_MAIN();
