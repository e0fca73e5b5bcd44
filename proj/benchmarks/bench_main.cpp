#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include <bakerlab/coherent.hpp>
#include <bakerlab/dft.hpp>
#include <bakerlab/hilbert.hpp>
#include <bakerlab/observable.hpp>
#include <bakerlab/propagator.hpp>
#include <bakerlab/quantisation.hpp>

using namespace bakerlab;

namespace {

StateVector random_state(int N) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  StateVector v(N);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v.normalized();
}

void BM_fft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  StateVector v = random_state(n);
  for (auto _ : state) {
    fft::transform({v.data(), static_cast<std::size_t>(v.size())}, Direction::forward);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetComplexityN(n);
}

void BM_apply_propagator(benchmark::State& state) {
  const auto pd = planck_data(static_cast<int>(state.range(0)));
  const StateVector v = random_state(pd.N);
  for (auto _ : state) benchmark::DoNotOptimize(apply_propagator(pd, v, 10));
}

void BM_build_propagator(benchmark::State& state) {
  const auto pd = planck_data(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_propagator(pd));
}

void BM_weyl_quantise(benchmark::State& state) {
  const auto pd = planck_data(static_cast<int>(state.range(0)));
  const ObservableSpec s = ObservableSpec::standard();
  for (auto _ : state) benchmark::DoNotOptimize(weyl_quantise(pd, s.modes));
}

void BM_torus_coherent(benchmark::State& state) {
  const auto pd = planck_data(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(torus_coherent(pd, {{0.3, 0.4}, 1.0}));
}

}  // namespace

BENCHMARK(BM_fft)->RangeMultiplier(2)->Range(64, 4096)->Complexity();
BENCHMARK(BM_apply_propagator)->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(BM_build_propagator)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weyl_quantise)->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(BM_torus_coherent)->RangeMultiplier(2)->Range(64, 1024);

BENCHMARK_MAIN();
