// Serial reference vs OpenMP kernels on the hot paths.

#include <benchmark/benchmark.h>

#include <random>

#include "qhc/channel.hpp"
#include "qhc/fixed_points.hpp"
#include "qhc/kernels.hpp"
#include "qhc/schur.hpp"

namespace {

using namespace qhc;

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

QuantumChannel haar_theta(const char* alias) {
  const auto g = std::make_shared<const FiniteGroup>(group_from_alias(alias));
  return theta(haar(*g), g);
}

void BM_Superoperator(benchmark::State& state) {
  const auto ch = haar_theta("s4");
  for (auto _ : state) benchmark::DoNotOptimize(ch.superoperator(mode(state)));
  state.SetLabel(mode(state) == Exec::Serial ? "serial" : "parallel");
}
BENCHMARK(BM_Superoperator)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ApplyBatch(benchmark::State& state) {
  const auto ch = haar_theta("d6");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Mat> inputs(256, Mat(12, 12));
  for (auto& m : inputs)
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) m(i, j) = cplx(n(rng), n(rng));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::apply_batch(ch.kraus(), inputs, mode(state)));
  state.SetLabel(mode(state) == Exec::Serial ? "serial" : "parallel");
}
BENCHMARK(BM_ApplyBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FixedPoints(benchmark::State& state) {
  const auto ch = haar_theta("d6");
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point_space(ch, mode(state)).dim());
  state.SetLabel(mode(state) == Exec::Serial ? "serial" : "parallel");
}
BENCHMARK(BM_FixedPoints)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AqbcSearch(benchmark::State& state) {
  const auto g = std::make_shared<const FiniteGroup>(group_from_alias("s3"));
  const auto pi = irrep_catalog(g).back();
  AqbcConfig cfg;
  cfg.seed = 7;
  cfg.n_samples = 2000;
  cfg.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(aqbc_search(pi, cfg).samples.size());
  state.SetLabel(mode(state) == Exec::Serial ? "serial" : "parallel");
}
BENCHMARK(BM_AqbcSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
