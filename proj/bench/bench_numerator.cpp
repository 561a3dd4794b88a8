// Serial vs OpenMP g2 numerator. Each iteration starts from a fresh analysis so the
// kernel cache is empty and every kernel is actually evaluated.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "filterstat/correlation_engine.hpp"

using namespace filterstat;

namespace {

EmitterModel dot() {
  QDParams p = QDParams::with_spin_flip_time(2000.0, 0.67, 20.0, 10.0, 0.0);
  p.pump_P = 0.1 * p.gamma_sp;
  return neutral_qd(p);
}

FilterSpec filter(int64_t kind) { return {static_cast<FilterKind>(kind), 0.0, 100.0}; }

void BM_numerator_serial(benchmark::State& state) {
  const auto m = dot();
  const auto f = filter(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    const auto a = analyze(m);
    state.ResumeTiming();
    benchmark::DoNotOptimize(numerator_serial(*a, f).total);
  }
}

void BM_numerator_parallel(benchmark::State& state) {
  const auto m = dot();
  const auto f = filter(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    state.PauseTiming();
    const auto a = analyze(m);
    state.ResumeTiming();
    benchmark::DoNotOptimize(numerator_parallel(*a, f).total);
  }
}

}  // namespace

// range(0): 0 Lorentzian, 1 Gaussian, 2 rectangular; range(1): threads
BENCHMARK(BM_numerator_serial)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_numerator_parallel)
    ->ArgsProduct({{0, 1, 2}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
