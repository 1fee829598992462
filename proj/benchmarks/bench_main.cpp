#include <benchmark/benchmark.h>

#include "cifcompare/covariance.hpp"
#include "cifcompare/resampling.hpp"
#include "cifcompare/simulation.hpp"
#include "cifcompare/two_sample.hpp"

using namespace cifcompare;

namespace {

struct Fixture {
  Sample a, b;
  Grid grid;
};

// DP3 samples with uniform censoring, n per group.
Fixture make(std::size_t n) {
  Rng rng(42);
  const Model m = ModelDP3{0.5};
  const Censoring c = UniformCensoring{0.0, 4.0};
  auto a = generate_sample(m, 1, n, c, NoTruncation{}, rng, "a").sample;
  auto b = generate_sample(m, 2, n, c, NoTruncation{}, rng, "b").sample;
  Grid g = event_grid(a, b, {0.0, 1.5}, false);
  return {std::move(a), std::move(b), std::move(g)};
}

void BM_CovarianceMoments(benchmark::State& state) {
  const Fixture f = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const CovGrid z = pooled_covariance(group_covariance(f.a, f.grid), group_covariance(f.b, f.grid), f.a.size(),
                                        f.b.size());
    benchmark::DoNotOptimize(covariance_moments(z, Weight::constant()));
  }
  state.counters["grid"] = static_cast<double>(f.grid.size());
}
BENCHMARK(BM_CovarianceMoments)->Arg(50)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_BootstrapReplicate(benchmark::State& state) {
  const Fixture f = make(static_cast<std::size_t>(state.range(0)));
  const EventTable ta(f.a), tb(f.b);
  const BootstrapEngine engine(ta, tb, f.grid);
  const auto keys = group_stream_keys("a", "b");
  BootstrapConfig cfg;
  std::vector<double> out;
  std::size_t r = 0;
  for (auto _ : state) {
    const Multipliers m = replicate_multipliers(cfg, r++, keys, engine.multiplier_count(1), engine.multiplier_count(2));
    engine.replicate(m.group1, m.group2, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_BootstrapReplicate)->Arg(50)->Arg(100)->Arg(400)->Arg(2000);

void BM_FullAnalysis(benchmark::State& state) {
  const Fixture f = make(static_cast<std::size_t>(state.range(0)));
  AnalysisOptions o;
  o.bootstrap.replicates = 999;
  for (auto _ : state) benchmark::DoNotOptimize(analyze(f.a, f.b, f.grid, o));
}
BENCHMARK(BM_FullAnalysis)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
