#include <benchmark/benchmark.h>

#include <random>

#include "ptfric/bath.hpp"
#include "ptfric/classical.hpp"
#include "ptfric/propagator.hpp"
#include "ptfric/spectrum.hpp"

using namespace ptf;

namespace {

const SystemParams reference = make_system_params(5.0, 1.0, 0.005);

CMat mixed_state(int n) {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  const CMat h = m * m.adjoint();
  return h / h.trace().real();
}

void BM_ClosedRhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OperatorSet ops(reference, n);
  const CMat rho = mixed_state(n);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(closed_rhs(rho, t, ops));
    t += 0.003;
  }
}
BENCHMARK(BM_ClosedRhs)->Arg(25)->Arg(50);

void BM_OpenRhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OperatorSet ops(reference, n);
  const BathRates rates(BathParams{}, 60.0);
  const CMat rho = mixed_state(n);
  const auto snap = solve_snapshot(100.0, ops);
  for (auto _ : state) benchmark::DoNotOptimize(open_rhs(rho, 100.0, ops, rates, snap));
}
BENCHMARK(BM_OpenRhs)->Arg(25)->Arg(50);

void BM_SMatrix(benchmark::State& state) {
  const OperatorSet ops(reference, 25);
  const BathRates rates(BathParams{}, 60.0);
  const auto snap = solve_snapshot(100.0, ops);
  const RMat A = ops.coupling(100.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_s_matrix(A, snap, rates));
}
BENCHMARK(BM_SMatrix);

void BM_Snapshot(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OperatorSet ops(reference, n);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_snapshot(t, ops));
    t += 0.5;
  }
}
BENCHMARK(BM_Snapshot)->Arg(25)->Arg(50);

void BM_SigmaShift(benchmark::State& state) {
  const BathParams bp{};
  double e = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sigma_shift(e, bp));
    e = e > 20.0 ? 0.1 : e + 0.37;
  }
}
BENCHMARK(BM_SigmaShift);

void BM_ClassicalPeriod(benchmark::State& state) {
  const auto p = make_system_params(5.0, 1.0, 0.15);
  const long steps = classical_steps_per_period(p);
  std::uint64_t k = 0;
  for (auto _ : state) {
    auto rng = trajectory_stream(1, k++);
    benchmark::DoNotOptimize(integrate_trajectory({}, p, BathParams{}, p.T_bar / steps, steps, steps, rng));
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_ClassicalPeriod);

}  // namespace

BENCHMARK_MAIN();
