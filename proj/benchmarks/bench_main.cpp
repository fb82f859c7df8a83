// Hot paths: the 2^n sign-pattern scan behind the bounds, the per-theta
// threshold evaluation, curve sweeps, and simulator round throughput.
#include <benchmark/benchmark.h>

#include "qsteer/efficiency.hpp"
#include "qsteer/experiment_sim.hpp"
#include "qsteer/lhs_bound.hpp"
#include "qsteer/measurement_sets.hpp"
#include "qsteer/noise.hpp"
#include "qsteer/steering_eval.hpp"

#include <cmath>
#include <random>

namespace {

using namespace qsteer;

// Random upper-hemisphere set, kept away from the equator so alignment and
// the zero-entanglement limit stay well defined.
MeasurementSet random_set(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> z(0.2, 1.0);
  std::uniform_real_distribution<double> az(0.0, 2.0 * 3.141592653589793);
  MeasurementSet set;
  set.label = SetLabel::user;
  set.name = "random" + std::to_string(n);
  for (int k = 0; k < n; ++k) {
    const double w = z(rng);
    const double phi = az(rng);
    const double r = std::sqrt(1.0 - w * w);
    set.directions.push_back({r * std::cos(phi), r * std::sin(phi), w});
  }
  return set;
}

void BM_lhs_bound(benchmark::State& state) {
  const MeasurementSet set = random_set(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lhs_bound(set));
  }
}
BENCHMARK(BM_lhs_bound)->Arg(6)->Arg(10)->Arg(16)->Arg(20);

void BM_critical_efficiency(benchmark::State& state) {
  const MeasurementSet set = make_set(SetLabel::icosahedron);
  for (auto _ : state) {
    benchmark::DoNotOptimize(critical_efficiency(0.7, set));
  }
}
BENCHMARK(BM_critical_efficiency);

void BM_eta_infinity_quadrature(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(eta_infinity_quadrature(0.7));
  }
}
BENCHMARK(BM_eta_infinity_quadrature);

void BM_efficiency_curve(benchmark::State& state) {
  const MeasurementSet set = make_set(SetLabel::icosahedron);
  for (auto _ : state) {
    benchmark::DoNotOptimize(efficiency_curve(set));
  }
}
BENCHMARK(BM_efficiency_curve);

void BM_min_over_theta(benchmark::State& state) {
  const MeasurementSet set = make_set(SetLabel::icosahedron);
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_over_theta(set, 0.10, NoiseKind::colored));
  }
}
BENCHMARK(BM_min_over_theta);

void BM_simulate_quantum(benchmark::State& state) {
  const MeasurementSet set = align_set(make_set(SetLabel::octahedron));
  const TwoQubitState src = pure_state(0.6);
  const AliceSettings alice = optimal_alice(0.6, set);
  const std::uint64_t rounds = 1 << 18;
  const int workers = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_quantum(src, alice, set, 0.9, rounds, seed++, 1.0, workers));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * rounds));
}
BENCHMARK(BM_simulate_quantum)->Arg(1)->Arg(0);  // 0 = all hardware threads

void BM_simulate_lhs(benchmark::State& state) {
  const MeasurementSet set = align_set(make_set(SetLabel::octahedron));
  const LHSStrategy strategy = saturating_strategy(set, lhs_bound(set));
  const std::uint64_t rounds = 1 << 18;
  const int workers = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_lhs(strategy, set, rounds, seed++, workers));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * rounds));
}
BENCHMARK(BM_simulate_lhs)->Arg(1)->Arg(0);

}  // namespace

BENCHMARK_MAIN();
