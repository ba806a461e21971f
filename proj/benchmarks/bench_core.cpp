#include <benchmark/benchmark.h>

#include "fedsel/consensus.hpp"
#include "fedsel/datagen.hpp"
#include "fedsel/debias.hpp"
#include "fedsel/lasso.hpp"

using namespace fedsel;

namespace {

Dataset make_data(std::size_t n, std::size_t p) {
  const auto gt = generate_ground_truth(p, 5, 0.1, 0.01, CovarianceSpec::identity(), 17);
  return sample_dataset(gt, n, 18);
}

void BM_FitLasso(benchmark::State& state) {
  const auto ds = make_data(static_cast<std::size_t>(state.range(0)),
                            static_cast<std::size_t>(state.range(1)));
  const double lambda = 0.05 * lambda_max(ds.X, ds.y);
  for (auto _ : state) benchmark::DoNotOptimize(fit_lasso(ds, lambda).coefficients.data());
}
BENCHMARK(BM_FitLasso)->Args({20, 100})->Args({200, 100})->Args({200, 500});

void BM_BuildM(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const auto ds = make_data(n, p);
  const double lt = lambda_tilde_theory(n, p);
  for (auto _ : state) benchmark::DoNotOptimize(build_M(ds.X, lt).data());
}
BENCHMARK(BM_BuildM)->Args({20, 100})->Args({200, 100})->Unit(benchmark::kMillisecond);

void BM_MajorityVote(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const std::size_t p = 10000;
  std::vector<FeatureSet> sets(N);
  for (std::size_t i = 0; i < N; ++i) {
    sets[i].client_id = i;
    for (std::size_t j = i % 7; j < p; j += 7) sets[i].indices.push_back(j);
  }
  for (auto _ : state) benchmark::DoNotOptimize(majority_vote(sets, N, p).selected.data());
}
BENCHMARK(BM_MajorityVote)->Arg(10)->Arg(100);

void BM_RunProtocol(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const auto ds = make_data(N * 20, 100);
  const auto part = partition_rows(ds, N, 19);
  ProtocolConfig pc;
  pc.sigma = 0.01;
  pc.jobs = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(part, pc).consensus.selected.data());
}
BENCHMARK(BM_RunProtocol)->Args({10, 1})->Args({10, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
