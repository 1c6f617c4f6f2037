#include <benchmark/benchmark.h>

#include "qsync/classical.hpp"
#include "qsync/dynamics.hpp"
#include "qsync/models.hpp"
#include "qsync/observables.hpp"

using namespace qsync;

namespace {

std::vector<double> grid(double t_end, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (n - 1);
  return t;
}

DvdpParams single() {
  DvdpParams p;
  p.lambda = 0.3;
  p.beta = 0.1;
  return p;
}

CoupledParams pair() {
  CoupledParams c;
  c.lambda = 0.5;
  c.eta = 0.6;
  c.delta = 0.2;
  return c;
}

void BM_AssembleApprox(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_approx_dvdp(single(), N));
}
BENCHMARK(BM_AssembleApprox)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_AssembleCoupled(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_coupled_dissipative(pair(), N));
}
BENCHMARK(BM_AssembleCoupled)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SteadyStateSingle(benchmark::State& st) {
  const Liouvillian L = build_approx_dvdp(single(), static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_steady_state(L));
}
BENCHMARK(BM_SteadyStateSingle)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SteadyStateCoupled(benchmark::State& st) {
  const Liouvillian L = build_coupled_dissipative(pair(), static_cast<int>(st.range(0)));
  SteadyStateOptions o;
  o.method = st.range(1) ? SteadyStateOptions::Method::gmres : SteadyStateOptions::Method::lu;
  for (auto _ : st) benchmark::DoNotOptimize(solve_steady_state(L, o));
}
BENCHMARK(BM_SteadyStateCoupled)
    ->ArgsProduct({{6, 10}, {0, 1}})
    ->ArgNames({"N", "gmres"})
    ->Unit(benchmark::kMillisecond);

void BM_PropagateDriven(benchmark::State& st) {
  DvdpParams p = single();
  p.F = 0.05;
  const Liouvillian L = build_approx_dvdp(p, static_cast<int>(st.range(0)));
  const DensityMatrix rho0 = fock_state(L.space(), {0});
  PropagateOptions o;
  o.keep_states = false;
  o.expect = {destroy(L.space(), 0)};
  for (auto _ : st) benchmark::DoNotOptimize(propagate(L, rho0, grid(20.0, 201), o));
}
BENCHMARK(BM_PropagateDriven)->Arg(15)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_WignerRadial(benchmark::State& st) {
  const DensityMatrix rho = steady_state(build_approx_dvdp(single(), 30));
  for (auto _ : st) benchmark::DoNotOptimize(wigner_radial(rho, 2.0));
}
BENCHMARK(BM_WignerRadial)->Unit(benchmark::kMillisecond);

void BM_ClassicalIntegration(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(integrate_dvdp(single(), TimeSpan{0.0, 500.0, 0.05}, ClassicalState{2.0, 0.0}));
}
BENCHMARK(BM_ClassicalIntegration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
