// Serial vs OpenMP timings for the parallel kernels.
#include <benchmark/benchmark.h>

#include "thomjiggle/cocycle.hpp"
#include "thomjiggle/transversality.hpp"

using namespace thom;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::Serial : ExecPolicy::Parallel;
}

void BM_IterateFold(benchmark::State& state) {
  const auto T = torus_triangulation(2, 2);
  const auto p = thom_pattern(2);
  for (auto _ : state) benchmark::DoNotOptimize(iterate_fold(T, p, 2, policy_of(state)));
}

void BM_Certify(benchmark::State& state) {
  const auto tower = iterate_fold(torus_triangulation(2, 2), thom_pattern(2), 1);
  const auto sec = jiggle_exp(tower, {2, ModelKind::Torus});
  const auto F = freeze_time(schedule_field(horizontal_field(2), exp_field(2), 0.25), 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(certify_transversality(sec, F, {}, policy_of(state)));
}

void BM_MuCocycle(benchmark::State& state) {
  const auto delta = default_target_simplex(2);
  const auto host = torus_host(2, 0);
  const auto form = random_family(2, delta, 1).form;
  for (auto _ : state) benchmark::DoNotOptimize(mu_cocycle(form, host, delta, {}, policy_of(state)));
}

void BM_HausdorffProfile(benchmark::State& state) {
  const auto T = torus_triangulation(2, 2);
  const auto samples = default_hausdorff_samples(*T);
  const auto p = thom_pattern(2);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_profile(T, p, 3, samples, policy_of(state)));
}

}  // namespace

// Argument 0 is the serial reference, 1 the OpenMP path.
BENCHMARK(BM_IterateFold)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Certify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MuCocycle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HausdorffProfile)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
