#include <benchmark/benchmark.h>

#include <random>

#include "ptffool/fooling.hpp"
#include "ptffool/gw.hpp"
#include "ptffool/kwise.hpp"
#include "ptffool/moments.hpp"
#include "ptffool/spectral.hpp"

using namespace ptffool;

namespace {

DegTwoPoly random_poly(unsigned n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DegTwoPoly p(n);
  for (unsigned i = 0; i < n; ++i) {
    p.linear[i] = g(rng);
    for (unsigned j = i + 1; j < n; ++j) p.add_term(i, j, g(rng));
  }
  return p;
}

void BM_GrayMoments(benchmark::State& state) {
  const auto p = random_poly(static_cast<unsigned>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(exact_abs_moments(p, 8));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}
BENCHMARK(BM_GrayMoments)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_VerifyKwise(benchmark::State& state) {
  const auto s = build_kwise_bernoulli(static_cast<unsigned>(state.range(0)), 4, KwiseMethod::bch_parity);
  for (auto _ : state) benchmark::DoNotOptimize(verify_kwise_exact(s, 4));
}
BENCHMARK(BM_VerifyKwise)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Jacobi(benchmark::State& state) {
  const auto p = random_poly(static_cast<unsigned>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose_symmetric(p.quad));
}
BENCHMARK(BM_Jacobi)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_WorstCaseLp(benchmark::State& state) {
  const auto p = random_poly(static_cast<unsigned>(state.range(0)), 3);
  LpOptions opt;
  opt.sense = Sense::max;
  opt.witnesses = false;
  for (auto _ : state) benchmark::DoNotOptimize(worst_case_lp(p, static_cast<unsigned>(state.range(1)), opt));
}
BENCHMARK(BM_WorstCaseLp)->Args({6, 2})->Args({8, 3})->Unit(benchmark::kMillisecond);

void BM_GwRounding(benchmark::State& state) {
  const Graph g = Graph::cycle(9);
  const auto e = generate_test_embedding(g, EmbeddingKind::random_unit, 4, 5);
  const GaussianSpace s(4, static_cast<unsigned>(state.range(0)), GaussianMethod::inverse_cdf, 1u << 20);
  for (auto _ : state) benchmark::DoNotOptimize(round_with_space(g, e, s, 10000, 7));
}
BENCHMARK(BM_GwRounding)->Arg(4)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
