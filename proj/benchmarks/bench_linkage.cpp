#include <numbers>

#include <benchmark/benchmark.h>

#include "bennett8/isogram.hpp"
#include "bennett8/linkage.hpp"
#include "bennett8/oracle.hpp"

namespace {

using namespace bennett8;
constexpr double kPi = std::numbers::pi;

EightBarSpec figure_spec() {
  EightBarSpec s;
  s.u2 = kPi / 3;
  s.u3 = 7 * kPi / 12;
  s.beta1 = kPi / 4;
  s.beta2 = kPi / 5;
  return derive_spec(s);
}

const EightBarGeometry& spherical() {
  static const EightBarGeometry g = validate_spec(figure_spec());
  return g;
}

const SpatialEightBarGeometry& spatial() {
  static const SpatialEightBarGeometry g = validate_spec(SpatialEightBarSpec{figure_spec(), 1.0, 0.7, {}, {}, {}});
  return g;
}

void BM_SolveSphericalIsogram(benchmark::State& state) {
  const SphericalIsogramSpec spec{kPi / 3, kPi / 4, Branch::Plus};
  const OrientedGreatCircle g0(Vec3::UnitZ());
  const SpherePoint P(Vec3::UnitX());
  for (auto _ : state) benchmark::DoNotOptimize(solve_spherical_isogram(spec, g0, P, 1.0));
}
BENCHMARK(BM_SolveSphericalIsogram);

void BM_AssembleSpherical(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(assemble_spherical(spherical(), 0.8));
}
BENCHMARK(BM_AssembleSpherical);

void BM_AssembleSpatial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(assemble_spatial(spatial(), 0.8));
}
BENCHMARK(BM_AssembleSpatial);

void BM_HalfturnReport(benchmark::State& state) {
  const EightBarPose pose = assemble_spherical(spherical(), 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(halfturn_products_report(pose));
}
BENCHMARK(BM_HalfturnReport);

void BM_SpatialSymmetryReport(benchmark::State& state) {
  const SpatialEightBarPose pose = assemble_spatial(spatial(), 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(symmetry_report_spatial(pose));
}
BENCHMARK(BM_SpatialSymmetryReport);

void BM_OracleIsogram(benchmark::State& state) {
  const SphericalIsogramSpec spec{kPi / 3, kPi / 4, Branch::Plus};
  const SphericalIsogramPose pose =
      solve_spherical_isogram(spec, OrientedGreatCircle(Vec3::UnitZ()), SpherePoint(Vec3::UnitX()), 1.0);
  oracle::LoopProblem problem = spherical_isogram_loop(spec, pose);
  for (std::size_t k = 1; k < problem.initial.size(); ++k) problem.initial[k] += 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(oracle::solve_loop(problem));
}
BENCHMARK(BM_OracleIsogram);

void BM_MobilitySpatial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mobility_check(spatial(), {0.8}));
}
BENCHMARK(BM_MobilitySpatial);

void BM_Sweep(benchmark::State& state) {
  const std::vector<double> phis = sweep_angles(-3.0, 3.0, 256, SweepSpacing::HalfAngleTangent);
  for (auto _ : state) benchmark::DoNotOptimize(sweep(spatial(), phis, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
