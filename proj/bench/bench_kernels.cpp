// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "frontlab/energy.hpp"
#include "frontlab/kernels.hpp"

namespace {

using namespace frontlab;

std::vector<double> front_values(const Grid& g) {
  std::vector<double> w(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) w[i] = 0.5 * (1.0 - std::tanh(g.at(i)));
  w.back() = 0.0;
  return w;
}

void BM_EnergySerial(benchmark::State& state) {
  const Grid g(-40.0, 120.0, static_cast<std::size_t>(state.range(0)));
  const Potential v = Potential::cubic(2.0);
  const auto wts = kernels::energy_weights(g, 1.5);
  const auto w = front_values(g);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::energy_serial(v, wts, w));
}

void BM_EnergyParallel(benchmark::State& state) {
  const Grid g(-40.0, 120.0, static_cast<std::size_t>(state.range(0)));
  const Potential v = Potential::cubic(2.0);
  const auto wts = kernels::energy_weights(g, 1.5);
  const auto w = front_values(g);
  kernels::Scratch scratch;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::energy_parallel(v, wts, w, scratch));
}

void BM_GradientSerial(benchmark::State& state) {
  const Grid g(-40.0, 120.0, static_cast<std::size_t>(state.range(0)));
  const Potential v = Potential::cubic(2.0);
  const auto wts = kernels::energy_weights(g, 1.5);
  const auto w = front_values(g);
  std::vector<double> grad(w.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::energy_gradient_serial(v, wts, w, grad));
}

void BM_GradientParallel(benchmark::State& state) {
  const Grid g(-40.0, 120.0, static_cast<std::size_t>(state.range(0)));
  const Potential v = Potential::cubic(2.0);
  const auto wts = kernels::energy_weights(g, 1.5);
  const auto w = front_values(g);
  std::vector<double> grad(w.size());
  kernels::Scratch scratch;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::energy_gradient_parallel(v, wts, w, grad, scratch));
}

void BM_MolRhsSerial(benchmark::State& state) {
  const Grid g(-300.0, 300.0, static_cast<std::size_t>(state.range(0)));
  const Potential v = Potential::cubic(4.0);
  const auto u = front_values(g);
  std::vector<double> du(u.size());
  for (auto _ : state) {
    kernels::mol_rhs_serial(v, u, 1.0 / (g.h() * g.h()), du);
    benchmark::DoNotOptimize(du.data());
  }
}

void BM_MolRhsParallel(benchmark::State& state) {
  const Grid g(-300.0, 300.0, static_cast<std::size_t>(state.range(0)));
  const Potential v = Potential::cubic(4.0);
  const auto u = front_values(g);
  std::vector<double> du(u.size());
  for (auto _ : state) {
    kernels::mol_rhs_parallel(v, u, 1.0 / (g.h() * g.h()), du);
    benchmark::DoNotOptimize(du.data());
  }
}

}  // namespace

BENCHMARK(BM_EnergySerial)->Arg(4001)->Arg(64001);
BENCHMARK(BM_EnergyParallel)->Arg(4001)->Arg(64001);
BENCHMARK(BM_GradientSerial)->Arg(4001)->Arg(64001);
BENCHMARK(BM_GradientParallel)->Arg(4001)->Arg(64001);
BENCHMARK(BM_MolRhsSerial)->Arg(6001)->Arg(96001);
BENCHMARK(BM_MolRhsParallel)->Arg(6001)->Arg(96001);

BENCHMARK_MAIN();
