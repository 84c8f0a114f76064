// Serial reference against the OpenMP path for the heavier kernels.

#include <benchmark/benchmark.h>

#include "equichord/checks.hpp"
#include "equichord/chords.hpp"
#include "equichord/harmonics.hpp"
#include "equichord/planar.hpp"
#include "equichord/shadow.hpp"

using namespace equichord;

namespace {

Exec policy(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

Body perturbed() {
  HarmonicBody3D s = HarmonicBody3D::zeros(4);
  s.base = Ellipsoid::diagonal(Vec3(0.25, 1.0, 1.0));
  s.coeff(4, 0) = 0.05;
  return Body(s);
}

void BM_ParallelChordProfile(benchmark::State& state) {
  const Body K = perturbed();
  const Body L = Body(Ellipsoid::diagonal(Vec3(0.25, 1.0, 1.0))).homothet(0.5, Vec3::Zero());
  for (auto _ : state) benchmark::DoNotOptimize(parallel_chord_profile(K, L, Direction(1, 2, 3), 256, policy(state)));
}

void BM_Section(benchmark::State& state) {
  const Body K = perturbed();
  const Plane P = Plane::through(Vec3(0.1, 0.2, 0.3), Direction(0.2, 1.0, 0.4));
  for (auto _ : state) benchmark::DoNotOptimize(section(K, P, 512, std::nullopt, policy(state)));
}

void BM_ShadowBoundary(benchmark::State& state) {
  const Body K = perturbed();
  for (auto _ : state) benchmark::DoNotOptimize(shadow_boundary(K, Direction(1, 1, 0), 256, policy(state)));
}

void BM_ParallelCheck(benchmark::State& state) {
  const Body K = perturbed();
  const Body L = Body(Ellipsoid::diagonal(Vec3(0.25, 1.0, 1.0))).homothet(0.5, Vec3::Zero());
  CheckConfig cfg;
  cfg.directions = 16;
  cfg.tangents = 64;
  cfg.exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_check("parallel", {K, L, std::nullopt, std::nullopt}, cfg));
}

}  // namespace

// Argument 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_ParallelChordProfile)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Section)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ShadowBoundary)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ParallelCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
