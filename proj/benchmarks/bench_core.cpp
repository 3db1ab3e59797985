#include <benchmark/benchmark.h>

#include <random>

#include "dyad/adversary.hpp"
#include "dyad/colourer.hpp"
#include "dyad/criteria.hpp"
#include "dyad/oracle.hpp"

using namespace dyad;

namespace {

IntervalSet random_subset(int j, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(p);
  std::vector<std::uint64_t> idx;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << j); ++k)
    if (keep(rng)) idx.push_back(k);
  return IntervalSet(j, std::move(idx));
}

void BM_CheckHomogeneous(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const Colouring col = colour_modulo_d(random_subset(j, 0.5, 1), 3);
  const HomogeneityParams params(Rational(1, 2), 3);
  for (auto _ : state) benchmark::DoNotOptimize(check_homogeneous(col, params));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(col.base().size()));
}
BENCHMARK(BM_CheckHomogeneous)->DenseRange(8, 20, 4);

void BM_CountTable(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const Colouring col = colour_modulo_d(random_subset(j, 0.5, 2), 4);
  for (auto _ : state) benchmark::DoNotOptimize(count_table(col, {0, 0}));
}
BENCHMARK(BM_CountTable)->DenseRange(8, 20, 4);

void BM_ExtendColouring(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  // Every other leaf in C and the rest in U: the pair is previsible.
  std::vector<std::uint64_t> even, odd;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << j); ++k) (k % 2 ? odd : even).push_back(k);
  const Colouring c = colour_modulo_d(IntervalSet(j, even), 2);
  const IntervalSet u(j, odd);
  const HomogeneityParams params(Rational(1, 2), 2);
  for (auto _ : state) benchmark::DoNotOptimize(extend_colouring(c, u, params));
}
BENCHMARK(BM_ExtendColouring)->DenseRange(6, 16, 2);

void BM_OracleStage(benchmark::State& state) {
  const auto fam = build_counterexample(ChainSpec::leftmost(1, static_cast<int>(state.range(0)),
                                                            static_cast<int>(state.range(0)) + 2));
  const Colouring base(fam.C(0), fam.spec.d());
  OracleOptions opts;
  opts.canonical = true;
  for (auto _ : state) benchmark::DoNotOptimize(oracle_extensions(base, fam.spec.params(), opts));
}
BENCHMARK(BM_OracleStage)->DenseRange(2, 5, 1);

void BM_VerifyCounterexample(benchmark::State& state) {
  const auto fam = build_counterexample(ChainSpec::leftmost(2, static_cast<int>(state.range(0)),
                                                            static_cast<int>(state.range(0)) + 3));
  for (auto _ : state) benchmark::DoNotOptimize(verify_counterexample(fam, true));
}
BENCHMARK(BM_VerifyCounterexample)->DenseRange(2, 4, 1);

}  // namespace

BENCHMARK_MAIN();
