// Serial reference path vs OpenMP path of the parallel kernels.
#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "tritrophic/cycles.hpp"
#include "tritrophic/dynamics.hpp"
#include "tritrophic/food_chain_averaging.hpp"

using namespace tritrophic;

namespace {

HopfSetup example() { return HopfSetup{5.0, 0.1, 3.0, 2.0, 0.4, 400.0, 1.0, 0.0, {}}; }

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_SampleIntegrands(benchmark::State& state) {
  const PeriodicSystem sys = food_chain_system(example());
  const VecX z = Eigen::Vector2d(2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_integrands(sys, z, 1024, true, exec_of(state)));
}

void BM_AverageSecond(benchmark::State& state) {
  const PeriodicSystem sys = food_chain_system(example());
  QuadratureOptions opt;
  opt.exec = exec_of(state);
  const VecX z = Eigen::Vector2d(2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(average_second(sys, z, opt));
}

void BM_CumulativeIntegral(benchmark::State& state) {
  const int n = 2048;
  Eigen::MatrixXd f(n, 2);
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * j / n;
    f.row(j) << std::exp(std::sin(t)), std::cos(3.0 * t) / (2.0 + std::cos(t));
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(cumulative_integral(f, 2.0 * std::numbers::pi, InnerRule::spectral, exec_of(state)));
}

void BM_SignChangeScan(benchmark::State& state) {
  const HopfSetup s = example();
  const Grid2 grid;
  auto field = [&](double r, double w) { return Eigen::Vector2d(closed_F20(s, r, w)); };
  for (auto _ : state) benchmark::DoNotOptimize(sign_change_scan(field, grid, exec_of(state)));
}

void BM_VerifyScan(benchmark::State& state) {
  const HopfSetup s = example();
  const CyclePrediction pred = predict_cycles(s)[0];
  const std::vector<double> eps{0.005, 0.0025, 0.00125};
  for (auto _ : state) benchmark::DoNotOptimize(verify_scan(s, pred, eps, {}, {}, exec_of(state)));
}

}  // namespace

// Argument 0 runs the serial reference path, 1 the OpenMP path.
BENCHMARK(BM_SampleIntegrands)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AverageSecond)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CumulativeIntegral)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SignChangeScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
