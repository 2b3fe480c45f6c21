// Serial reference against the OpenMP point loops on the same suites.

#include <benchmark/benchmark.h>

#include <string>

#include "ckp/suites.hpp"

using namespace ckp;

namespace {

RunConfig config(int n, int k, int points) {
  return parse_spec_text("n: " + std::to_string(n) + "\nk: " + std::to_string(k) + "\npoints: " +
                         std::to_string(points) + "\nseed: 7\nfamily: perturbed\n");
}

template <Report (*Suite)(const RunConfig&, Exec)>
void run(benchmark::State& state, Exec exec) {
  const RunConfig cfg = config(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                               static_cast<int>(state.range(2)));
  for (auto _ : state) {
    Report r = Suite(cfg, exec);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * cfg.points);
}

void identities_serial(benchmark::State& s) { run<run_identities>(s, Exec::Serial); }
void identities_parallel(benchmark::State& s) { run<run_identities>(s, Exec::Parallel); }
void prolong_serial(benchmark::State& s) { run<run_prolong>(s, Exec::Serial); }
void prolong_parallel(benchmark::State& s) { run<run_prolong>(s, Exec::Parallel); }
void invariance_serial(benchmark::State& s) { run<run_invariance>(s, Exec::Serial); }
void invariance_parallel(benchmark::State& s) { run<run_invariance>(s, Exec::Parallel); }

}  // namespace

#define POINT_ARGS Args({4, 2, 8})->Args({5, 2, 8})->Unit(benchmark::kMillisecond)->UseRealTime()
BENCHMARK(identities_serial)->POINT_ARGS;
BENCHMARK(identities_parallel)->POINT_ARGS;
BENCHMARK(prolong_serial)->POINT_ARGS;
BENCHMARK(prolong_parallel)->POINT_ARGS;
BENCHMARK(invariance_serial)->POINT_ARGS;
BENCHMARK(invariance_parallel)->POINT_ARGS;

BENCHMARK_MAIN();
