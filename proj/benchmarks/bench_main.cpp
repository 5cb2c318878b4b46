#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "bosegas/charged_gas.hpp"
#include "bosegas/dilute_bounds.hpp"
#include "bosegas/gp_solver.hpp"
#include "bosegas/scattering.hpp"

using namespace bosegas;

static void BM_ScatteringSquareWell(benchmark::State& state) {
  const auto p = PairPotential::square_well(static_cast<double>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(scattering_length(p, Units::dilute()));
}
BENCHMARK(BM_ScatteringSquareWell)->Arg(1)->Arg(100);

static void BM_ScatteringHardCore2D(benchmark::State& state) {
  const auto p = PairPotential::hard_core(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(scattering_length(p, Units::dilute(), 2));
}
BENCHMARK(BM_ScatteringHardCore2D);

static void BM_TempleK(benchmark::State& state) {
  double n = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(temple_K(n, 1e4, 50.0, 1.0, 0.1, 1.0));
    n = n > 40.0 ? 2.0 : n + 1.0;
  }
}
BENCHMARK(BM_TempleK);

static void BM_TempleKExtended(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(temple_K_extended(8.0, 1e4, 50.0, 1.0, 0.1, 1.0));
}
BENCHMARK(BM_TempleKExtended);

static void BM_OptimizeErrorConstant(benchmark::State& state) {
  std::vector<double> Y;
  for (int e = -24; e <= -16; ++e) Y.push_back(std::pow(10.0, e));
  for (auto _ : state) benchmark::DoNotOptimize(optimize_error_constant(Y).C);
}
BENCHMARK(BM_OptimizeErrorConstant)->Unit(benchmark::kMillisecond);

static void BM_CellBruteForce(benchmark::State& state) {
  OccupancyOptions o;
  o.denominator = 16;
  o.n_max = 24;
  for (auto _ : state) benchmark::DoNotOptimize(cell_occupancy_minimize(4.0, 24, OccupancyMode::brute_force, o));
}
BENCHMARK(BM_CellBruteForce)->Unit(benchmark::kMillisecond);

static void BM_FoldyConstant(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(foldy_constant().first);
}
BENCHMARK(BM_FoldyConstant)->Unit(benchmark::kMicrosecond);

static void BM_GpRadial(benchmark::State& state) {
  GPProblem p;
  p.N = 1000.0;
  p.a = static_cast<double>(state.range(0)) / 1000.0;
  for (auto _ : state) benchmark::DoNotOptimize(gp_minimize(p).energy.total);
}
BENCHMARK(BM_GpRadial)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_GpAnisotropic(benchmark::State& state) {
  GPProblem p;
  p.trap = TrapPotential::harmonic({1.0, 1.5, 2.0});
  p.N = 100.0;
  p.a = 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(gp_minimize(p).energy.total);
}
BENCHMARK(BM_GpAnisotropic)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
