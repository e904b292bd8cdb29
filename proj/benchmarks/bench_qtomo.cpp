#include <benchmark/benchmark.h>

#include "qtomo/qtomo.hpp"

using namespace qtomo;

namespace {

Protocol protocol_for(int kind, int s) { return kind == 0 ? build_mub(s) : build_two_level(s); }

void BM_InformationMatrix(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  const auto p = build_mub(s);
  const auto c = random_hs_mixed(s, r, 1);
  for (auto _ : state) benchmark::DoNotOptimize(complete_information_matrix(p, c, 1e5));
}
BENCHMARK(BM_InformationMatrix)->Args({2, 1})->Args({3, 1})->Args({5, 1})->Args({8, 1})->Args({8, 8});

void BM_LossSpectrum(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  const auto p = protocol_for(static_cast<int>(state.range(2)), s);
  const auto c = random_hs_mixed(s, r, 2);
  for (auto _ : state) benchmark::DoNotOptimize(loss_spectrum(p, c, 1e5));
}
BENCHMARK(BM_LossSpectrum)
    ->Args({3, 1, 0})
    ->Args({3, 1, 1})
    ->Args({8, 1, 0})
    ->Args({8, 1, 1})
    ->Args({8, 8, 0})
    ->Args({8, 8, 1});

void BM_SimulateCounts(benchmark::State& state) {
  const auto p = build_mub(static_cast<int>(state.range(0)));
  const auto c = random_haar_pure(p.dim(), 3).purification();
  const auto shots = static_cast<std::int64_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_counts(p, c, shots, ++seed));
}
BENCHMARK(BM_SimulateCounts)->Args({3, 100000})->Args({8, 100000})->Args({8, 100000000});

void BM_Reconstruct(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  const auto p = build_mub(s);
  const auto truth = random_hs_mixed(s, r, 4);
  const auto counts = simulate_counts(p, truth, 100000, 5);
  MleOptions opts;
  opts.rank = r;
  opts.method = state.range(2) == 0 ? MleMethod::scoring : MleMethod::fixed_point;
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(p, counts, opts));
}
BENCHMARK(BM_Reconstruct)
    ->Args({2, 1, 0})
    ->Args({3, 1, 0})
    ->Args({3, 1, 1})
    ->Args({5, 1, 0})
    ->Args({8, 8, 0})
    ->Unit(benchmark::kMillisecond);

void BM_FrameOptimize(benchmark::State& state) {
  FrameOptions opts;
  opts.restarts = 1;
  const int s = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(optimize_frame(s, m, opts));
}
BENCHMARK(BM_FrameOptimize)->Args({2, 4})->Args({3, 12})->Args({3, 30})->Unit(benchmark::kMillisecond);

void BM_TheoryEnsemble(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.protocol.s = static_cast<int>(state.range(0));
  cfg.ensemble = 1000;
  cfg.threads = 1;
  const auto p = make_protocol(cfg.protocol);
  for (auto _ : state) benchmark::DoNotOptimize(run_theory(cfg, p));
}
BENCHMARK(BM_TheoryEnsemble)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
