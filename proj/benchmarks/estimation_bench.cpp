#include <benchmark/benchmark.h>

#include <vector>

#include "rankfeed/estimation.hpp"

namespace rankfeed {
namespace {

std::vector<Ranking> make_rankings(std::size_t n, std::size_t K, std::size_t count) {
  UtilityVector u(n, 0.0);
  for (std::size_t a = 0; a + 1 < n; ++a) u[a] = 0.5 - static_cast<double>(a) / n;
  Rng rng(2);
  std::vector<Ranking> out;
  for (std::size_t i = 0; i < count; ++i) {
    Proposal p;
    for (std::size_t k = 0; k < K; ++k) p.entries.push_back(rng.index(n));
    out.push_back(sample_ranking(u, {1.0}, p, rng));
  }
  return out;
}

void BM_WindowPushEstimate(benchmark::State& state) {
  const std::size_t n = 10, K = static_cast<std::size_t>(state.range(0));
  const auto rankings = make_rankings(n, K, 4096);
  WindowEstimator window(n, K, EstimatorConfig{1000, 1.0});
  std::size_t i = 0;
  for (auto _ : state) {
    window.push(rankings[i++ % rankings.size()]);
    benchmark::DoNotOptimize(window.estimate());
  }
}
BENCHMARK(BM_WindowPushEstimate)->Arg(2)->Arg(4)->Arg(10);

void BM_BatchEstimate(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const auto rankings = make_rankings(10, 4, m);
  for (auto _ : state) benchmark::DoNotOptimize(estimate(rankings, 10, 1.0));
}
BENCHMARK(BM_BatchEstimate)->Arg(1000)->Arg(10000);

}  // namespace
}  // namespace rankfeed
