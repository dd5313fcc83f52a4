// OpenMP kernels against the serial reference. The `threads` argument is the
// OpenMP thread count; serial variants ignore it.

#include <benchmark/benchmark.h>

#include <cmath>
#include <map>

#include "czlab/characteristics.hpp"
#include "czlab/parallel.hpp"
#include "czlab/positive.hpp"
#include "czlab/random.hpp"
#include "czlab/serial.hpp"
#include "czlab/shifts.hpp"
#include "czlab/weights.hpp"

namespace {

using namespace czlab;

struct Inputs {
  explicit Inputs(int level)
      : grid(1, level),
        shift(build_random_shift(2, 2, 7, grid, true)),
        w(cascade_weight(grid, 0.7, 11)),
        tau(grid) {
    Rng rng(static_cast<std::uint64_t>(level));
    std::vector<double> v(grid.cell_count());
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    f = StepFunction(grid, v);
    for (int k = 0; k <= level; ++k) {
      for (std::uint64_t c = 0; c < grid.cube_count(k); ++c) {
        if (rng.uniform() < 0.5) tau.set(DyadicCube::from_code(1, k, c), rng.uniform());
      }
    }
  }
  GridSpec grid;
  StepFunction f;
  HaarShift shift;
  Weight w;
  TauCoefficients tau;
};

const Inputs& inputs(int level) {
  static std::map<int, Inputs> cache;
  auto it = cache.find(level);
  if (it == cache.end()) it = cache.emplace(level, Inputs(level)).first;
  return it->second;
}

template <typename Fn>
void run(benchmark::State& state, Fn fn) {
  const Inputs& in = inputs(static_cast<int>(state.range(0)));
  set_thread_count(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(fn(in));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.grid.cell_count()));
}

void BM_ApplyShift(benchmark::State& s) { run(s, [](const Inputs& in) { return apply_shift(in.shift, in.f); }); }
void BM_ApplyShiftSerial(benchmark::State& s) {
  run(s, [](const Inputs& in) { return serial::apply_shift(in.shift, in.f); });
}
void BM_Truncation(benchmark::State& s) { run(s, [](const Inputs& in) { return maximal_truncation(in.shift, in.f); }); }
void BM_TruncationSerial(benchmark::State& s) {
  run(s, [](const Inputs& in) { return serial::maximal_truncation(in.shift, in.f); });
}
void BM_Positive(benchmark::State& s) { run(s, [](const Inputs& in) { return apply_positive(in.tau, in.w, in.f); }); }
void BM_PositiveSerial(benchmark::State& s) {
  run(s, [](const Inputs& in) { return serial::apply_positive(in.tau, in.w, in.f); });
}
void BM_Maximal(benchmark::State& s) { run(s, [](const Inputs& in) { return maximal_function(in.f); }); }
void BM_MaximalSerial(benchmark::State& s) { run(s, [](const Inputs& in) { return serial::maximal_function(in.f); }); }
void BM_Ap(benchmark::State& s) { run(s, [](const Inputs& in) { return ap_characteristic(in.w, 3.0).value; }); }
void BM_ApSerial(benchmark::State& s) { run(s, [](const Inputs& in) { return serial::ap_characteristic(in.w, 3.0); }); }
void BM_Ainfty(benchmark::State& s) { run(s, [](const Inputs& in) { return ainfty_characteristic(in.w).value; }); }
void BM_AinftySerial(benchmark::State& s) {
  run(s, [](const Inputs& in) { return serial::ainfty_characteristic(in.w); });
}

// [level, threads]; the serial kernels blow up quadratically, so they stop earlier.
void parallel_args(benchmark::internal::Benchmark* b) {
  for (int level : {10, 14, 18}) {
    for (int threads : {1, 2, 4}) b->Args({level, threads});
  }
}
void serial_args(benchmark::internal::Benchmark* b) {
  for (int level : {10, 14}) b->Args({level, 1});
}

}  // namespace

BENCHMARK(BM_ApplyShift)->Apply(parallel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_ApplyShiftSerial)->Apply(serial_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_Truncation)->Apply(parallel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_TruncationSerial)->Apply(serial_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_Positive)->Apply(parallel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_PositiveSerial)->Apply(serial_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_Maximal)->Apply(parallel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_MaximalSerial)->Apply(serial_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_Ap)->Apply(parallel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_ApSerial)->Apply(serial_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_Ainfty)->Apply(parallel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_AinftySerial)->Apply(serial_args)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
