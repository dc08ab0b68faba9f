#include <benchmark/benchmark.h>

#include <cstdint>

#include "cyclefill/chains.hpp"
#include "cyclefill/rng.hpp"
#include "cyclefill/witness.hpp"

using namespace cyclefill;

namespace {

ZeroCycle iid_square_cycle(int N, std::uint64_t seed) {
  RngStream rng(seed, 0);
  ZeroCycle z;
  z.ambient = Ambient::cube(2);
  for (int i = 0; i < N; ++i) z.points.push_back({rng.point(2), rng.sign()});
  return z;
}

}  // namespace

static void BM_MultiscaleBuild(benchmark::State& state) {
  const ZeroCycle z = iid_square_cycle(int(state.range(0)), 43);
  for (auto _ : state) benchmark::DoNotOptimize(build_multiscale_witness(z));
}
BENCHMARK(BM_MultiscaleBuild)->Range(1 << 10, 1 << 13)->Unit(benchmark::kMillisecond);

static void BM_MultiscaleLip(benchmark::State& state) {
  const ZeroCycle z = iid_square_cycle(int(state.range(0)), 47);
  const WitnessFunction w = build_multiscale_witness(z);
  for (auto _ : state) benchmark::DoNotOptimize(lip_bound(w));
}
BENCHMARK(BM_MultiscaleLip)->Range(1 << 10, 1 << 13)->Unit(benchmark::kMillisecond);

static void BM_GridBound(benchmark::State& state) {
  const ZeroCycle z = iid_square_cycle(int(state.range(0)), 53);
  for (auto _ : state) {
    const WitnessFunction w = build_grid_witness(z);
    benchmark::DoNotOptimize(witness_lower_bound(w, z));
  }
}
BENCHMARK(BM_GridBound)->Range(1 << 10, 1 << 13)->Unit(benchmark::kMillisecond);
