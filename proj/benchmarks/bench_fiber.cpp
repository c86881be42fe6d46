// Microbenchmarks for the pointwise fiber algebra (the per-site inner loop
// of every lattice pass).

#include <benchmark/benchmark.h>

#include "g2flow/algebra.hpp"
#include "g2flow/random.hpp"

using namespace g2flow;

namespace {

ThreeForm bench_fiber() {
  SplitMix64 rng(1234);
  return random_positive_fiber(rng);
}

void BM_MetricFromPhi(benchmark::State& state) {
  const ThreeForm phi = bench_fiber();
  for (auto _ : state) {
    benchmark::DoNotOptimize(metric_from_phi(phi));
  }
}
BENCHMARK(BM_MetricFromPhi);

void BM_PsiFromPhi(benchmark::State& state) {
  const ThreeForm phi = bench_fiber();
  const Metric m = metric_from_phi(phi);
  for (auto _ : state) {
    benchmark::DoNotOptimize(psi_from_phi(phi, m));
  }
}
BENCHMARK(BM_PsiFromPhi);

void BM_HodgeStar5(benchmark::State& state) {
  const ThreeForm phi = bench_fiber();
  const Metric m = metric_from_phi(phi);
  SplitMix64 rng(5);
  FiveForm f;
  for (int i = 0; i < 21; ++i) f.c[i] = rng.next_uniform();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hodge_star<5>(f, m));
  }
}
BENCHMARK(BM_HodgeStar5);

void BM_JPhi(benchmark::State& state) {
  const ThreeForm phi = bench_fiber();
  const Metric m = metric_from_phi(phi);
  SplitMix64 rng(7);
  const ThreeForm gamma = random_three_form(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(j_phi(gamma, phi, m));
  }
}
BENCHMARK(BM_JPhi);

void BM_Project3(benchmark::State& state) {
  const ThreeForm phi = bench_fiber();
  const Metric m = metric_from_phi(phi);
  const FourForm psi = psi_from_phi(phi, m);
  SplitMix64 rng(11);
  const ThreeForm gamma = random_three_form(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project3(gamma, phi, psi, m));
  }
}
BENCHMARK(BM_Project3);

void BM_ContractionIdentities(benchmark::State& state) {
  const ThreeForm phi = bench_fiber();
  const Metric m = metric_from_phi(phi);
  const FourForm psi = psi_from_phi(phi, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_contraction_identities(phi, psi, m));
  }
}
BENCHMARK(BM_ContractionIdentities);

}  // namespace

BENCHMARK_MAIN();
