#include <benchmark/benchmark.h>

#include "noisyor/distribution.hpp"
#include "noisyor/polynomial.hpp"
#include "noisyor/reconstruct.hpp"
#include "noisyor/sampler.hpp"
#include "noisyor/seq.hpp"

namespace {

using namespace noisyor;

NetworkFamily bench_family(int k, int l) {
  NetworkFamily fam;
  fam.fan_in_k = k;
  fam.weight_values = {Rational(1, 4)};
  if (l > 1) fam.weight_values.push_back(Rational(1, 2));
  if (l > 2) fam.weight_values.push_back(Rational(3, 4));
  return fam;
}

void BM_Draw(benchmark::State& state) {
  const NoisyOrNetwork net =
      random_network(bench_family(3, 3), static_cast<int>(state.range(0)),
                     static_cast<int>(state.range(0)), 1);
  SplitMix64 rng(7);
  std::vector<std::uint8_t> buffer;
  for (auto _ : state) {
    draw_into(net, 0.5, rng, buffer);
    benchmark::DoNotOptimize(buffer);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Draw)->Arg(20)->Arg(100);

void BM_SampleSummary(benchmark::State& state) {
  const NoisyOrNetwork net = random_network(bench_family(3, 2), 10, 8, 2);
  const BiasSetting bias{Rational(2, 5)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_summary(net, bias, static_cast<std::uint64_t>(state.range(0)), 3));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleSummary)->Arg(10000)->Arg(100000);

void BM_BruteForceJoint(benchmark::State& state) {
  const NoisyOrNetwork net =
      random_network(bench_family(3, 2), static_cast<int>(state.range(0)), 5, 4);
  const BiasSetting bias{Rational(1, 3)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_joint(net, bias));
  }
}
BENCHMARK(BM_BruteForceJoint)->Arg(8)->Arg(12);

void BM_SubsetZeroTable(benchmark::State& state) {
  const NoisyOrNetwork net = random_network(bench_family(3, 3), 30, 12, 5);
  const BiasSetting bias{Rational(1, 3)};
  const std::vector<int> Y = {1, 4, 7, 9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(subset_zero_table(net, Y, bias));
  }
}
BENCHMARK(BM_SubsetZeroTable);

void BM_Reconstruct(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const NetworkFamily fam = bench_family(2, 1);
  const NoisyOrNetwork target = random_network(fam, m, n, 6);
  ReconstructionConfig cfg;
  cfg.num_inputs = m;
  cfg.num_outputs = n;
  cfg.family = fam;
  cfg.bias = Rational(1, 3);
  for (auto _ : state) {
    StructuralSeqOracle oracle(target);
    benchmark::DoNotOptimize(reconstruct(oracle, cfg));
  }
}
BENCHMARK(BM_Reconstruct)->Args({10, 8})->Args({25, 20})->Args({50, 40});

void BM_SeparationCurve(benchmark::State& state) {
  NetworkFamily fam = bench_family(2, 1);
  fam.weight_values = {Rational(1, 2)};
  fam.subclass = Subclass::kOneWeightValue;
  const FamilyPolynomialTable table = family_polynomial_table(fam, 6, 3, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        min_separation_curve(table, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_SeparationCurve)->Arg(256)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
