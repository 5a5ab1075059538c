#include "gyrostab/gyrostat.hpp"
#include "gyrostab/linalg.hpp"
#include "gyrostab/numerics.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace gyrostab;
using gyrostat::Params;
using gyrostat::State;
using linalg::Vec3;

Params reference_params() {
  Params p;
  p.mu = Vec3(1.0, 0.0, 0.0);
  return p;
}

State generic_state() {
  return {Vec3(2.0, -1.0, 0.5), Vec3(0.3, 1.0, -0.7)};
}

void BM_Rhs(benchmark::State& state) {
  const Params p = reference_params();
  const State x = generic_state();
  for (auto _ : state) benchmark::DoNotOptimize(gyrostat::rhs(p, x));
}
BENCHMARK(BM_Rhs);

void BM_Jacobian(benchmark::State& state) {
  const Params p = reference_params();
  const State x = generic_state();
  for (auto _ : state) benchmark::DoNotOptimize(gyrostat::jacobian(p, x));
}
BENCHMARK(BM_Jacobian);

void BM_Eigenvalues6(benchmark::State& state) {
  const Params p = reference_params();
  const auto jac = gyrostat::jacobian(p, generic_state());
  for (auto _ : state) benchmark::DoNotOptimize(linalg::eigenvalues(jac));
}
BENCHMARK(BM_Eigenvalues6);

void BM_CharPoly6(benchmark::State& state) {
  const Params p = reference_params();
  const auto jac = gyrostat::jacobian(p, generic_state());
  for (auto _ : state) benchmark::DoNotOptimize(linalg::char_poly(jac));
}
BENCHMARK(BM_CharPoly6);

void BM_IntegrateUnitTime(benchmark::State& state) {
  const Params p = reference_params();
  const State x0 = generic_state();
  for (auto _ : state)
    benchmark::DoNotOptimize(numerics::integrate(p, x0, 1.0, 1e-3));
}
BENCHMARK(BM_IntegrateUnitTime)->Unit(benchmark::kMicrosecond);

void BM_Analyze(benchmark::State& state) {
  const Params p = reference_params();
  const auto eq = gyrostat::make_e12(p, 2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gyrostat::analyze(p, eq));
}
BENCHMARK(BM_Analyze);

void BM_ClassifyState(benchmark::State& state) {
  const Params p = reference_params();
  const auto eq = gyrostat::make_relative(p, gyrostat::Family::E5, 1.1, 0.4);
  for (auto _ : state)
    benchmark::DoNotOptimize(gyrostat::classify_state(p, eq.state, 1e-9));
}
BENCHMARK(BM_ClassifyState);

}  // namespace

BENCHMARK_MAIN();
