// Serial reference vs OpenMP zero test on the vanishing classes.
#include <benchmark/benchmark.h>

#include "rtcalc/cycles.hpp"

using namespace rtcalc;

namespace {

void zero_test_bench(benchmark::State& state, Exec exec) {
  const int n = static_cast<int>(state.range(0));
  const Class0 z = z_cycle(n, n - 2, 1);
  (void)zero_test(z, Exec::Serial);  // warm the strata cache
  for (auto _ : state) {
    const ZeroReport r = zero_test(z, exec);
    benchmark::DoNotOptimize(r.zero);
  }
  state.counters["terms"] = static_cast<double>(z.size());
}

void BM_ZeroTestSerial(benchmark::State& s) { zero_test_bench(s, Exec::Serial); }
void BM_ZeroTestParallel(benchmark::State& s) { zero_test_bench(s, Exec::Parallel); }

}  // namespace

BENCHMARK(BM_ZeroTestSerial)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZeroTestParallel)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
