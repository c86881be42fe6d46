// Lattice-level benchmarks: a velocity evaluation, a full RK4 step, and the
// curvature/Lambda diagnostic pass on a small 3-axis grid.

#include <benchmark/benchmark.h>

#include "g2flow/flow.hpp"
#include "g2flow/initial.hpp"

using namespace g2flow;

namespace {

constexpr double kPi = 3.14159265358979323846;

FlowState bench_state(int n) {
  LatticeSpec spec;
  for (int a = 0; a < 7; ++a) {
    spec.dims[a] = (a < 3) ? n : 1;
    spec.spacing[a] = (a < 3) ? 2.0 * kPi / n : 1.0;
  }
  const InitialData init = make_initial(
      spec, {parse_mode("amp=0.010 wave=1,0,0,0,0,0,0 pair=2,3"),
             parse_mode("amp=0.007 wave=0,1,0,0,0,0,0 pair=4,6 trig=cos"),
             parse_mode("amp=0.006 wave=0,0,1,0,0,0,0 pair=1,7 phase=0.3")});
  return FlowState(init.phi, 0.0);
}

void BM_Velocity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FlowState s = bench_state(n);
  for (auto _ : state) {
    FlowState fresh(s.phi(), 0.0);  // drop caches so the full path is timed
    benchmark::DoNotOptimize(velocity(fresh));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.phi().site_count()));
}
BENCHMARK(BM_Velocity)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Rk4Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FlowState s = bench_state(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(s, 1e-4, Integrator::kRk4));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.phi().site_count()));
}
BENCHMARK(BM_Rk4Step)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_LambdaDiagnostic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FlowState s = bench_state(n);
  for (auto _ : state) {
    FlowState fresh(s.phi(), 0.0);
    const LambdaField lf =
        lambda_field(fresh.grad_t(), fresh.curvature(), fresh.geometry().metric);
    benchmark::DoNotOptimize(lf.sup);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.phi().site_count()));
}
BENCHMARK(BM_LambdaDiagnostic)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
