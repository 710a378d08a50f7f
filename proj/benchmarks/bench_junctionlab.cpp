// Performance tracking for the hot paths: grid construction, the modal
// solve, frequency-curve assembly, eigenbasis projection, the coefficient
// estimators, and the counterexample root-finds.
#include <benchmark/benchmark.h>

#include <vector>

#include "jlab/almgren.hpp"
#include "jlab/asymptotics.hpp"
#include "jlab/counterexample.hpp"
#include "jlab/eigenbasis.hpp"
#include "jlab/field.hpp"
#include "jlab/geometry.hpp"
#include "jlab/solver.hpp"

namespace {

void BM_BuildPolarGrid(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(jlab::build_polar_grid(1.0, 1e-6, nr, 257));
}
BENCHMARK(BM_BuildPolarGrid)->Arg(257)->Arg(513);

void BM_SolveMixedBVP(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  const int k_max = static_cast<int>(state.range(1));
  const jlab::PolarGrid grid = jlab::build_polar_grid(0.41, 1e-6, nr, 129);
  const jlab::CoefficientData coeff = jlab::CoefficientData::constants(0.5, 0.5);
  const jlab::ArcData arc = jlab::ArcData::mode(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(jlab::solve_mixed_bvp(coeff, arc, grid, k_max));
}
BENCHMARK(BM_SolveMixedBVP)->Args({257, 8})->Args({513, 16});

void BM_FrequencyCurve(benchmark::State& state) {
  const jlab::PolarGrid grid = jlab::build_polar_grid(1.0, 1e-6, 513, 129);
  const jlab::ScalarField field = jlab::mode_mixture_field(grid, {1.0, 0.3, 0.1});
  const jlab::CoefficientData coeff = jlab::CoefficientData::zero();
  const std::vector<double> radii = jlab::default_curve_radii(grid, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(jlab::frequency_curve(field, coeff, radii));
}
BENCHMARK(BM_FrequencyCurve);

void BM_ProjectSk(benchmark::State& state) {
  const jlab::PolarGrid grid = jlab::build_polar_grid(1.0, 1e-6, 513, 257);
  const jlab::ScalarField field = jlab::mode_mixture_field(
      grid, {1.0, 0.3, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002});
  for (auto _ : state) benchmark::DoNotOptimize(jlab::project_Sk(field, 0.5, 8));
}
BENCHMARK(BM_ProjectSk);

void BM_BetaFormula(benchmark::State& state) {
  const jlab::PolarGrid grid = jlab::build_polar_grid(0.41, 1e-6, 513, 129);
  const jlab::CoefficientData coeff = jlab::CoefficientData::constants(0.5, 0.5);
  const jlab::ScalarField field =
      jlab::solve_mixed_bvp(coeff, jlab::ArcData::mode(1), grid, 8);
  for (auto _ : state)
    benchmark::DoNotOptimize(jlab::beta_formula(field, coeff, 0.2, 1));
}
BENCHMARK(BM_BetaFormula);

void BM_HardyInterior(benchmark::State& state) {
  const jlab::PolarGrid grid = jlab::build_polar_grid(1.0, 1e-6, 513, 129);
  const jlab::ScalarField field = jlab::mode_mixture_field(grid, {0.7, -0.4, 0.2});
  for (auto _ : state) benchmark::DoNotOptimize(jlab::hardy_interior(field, 0.5));
}
BENCHMARK(BM_HardyInterior);

void BM_CornerOrdinateRoot(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(jlab::cx::h_plus(1e-4));
}
BENCHMARK(BM_CornerOrdinateRoot);

void BM_StimaRatio(benchmark::State& state) {
  const std::vector<double> x1 = {1e-4};
  for (auto _ : state) benchmark::DoNotOptimize(jlab::cx::stima_ratio(x1));
}
BENCHMARK(BM_StimaRatio);

void BM_StableManifoldTrace(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(jlab::cx::trace_gamma_minus(1e-3, 0.02, 1500));
}
BENCHMARK(BM_StableManifoldTrace);

}  // namespace

BENCHMARK_MAIN();
