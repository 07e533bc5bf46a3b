// Copyright 2026 The PQMC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <benchmark/benchmark.h>

#include <pqmc/energy.hpp>
#include <pqmc/engine.hpp>
#include <pqmc/lds.hpp>
#include <pqmc/model.hpp>
#include <pqmc/resample.hpp>
#include <pqmc/weights.hpp>

namespace {

pqmc::WeightedSample mixture_sample(std::size_t m) {
  const auto target = pqmc::make_mixture_target(pqmc::five_normal_mixture_2d());
  pqmc::PointMatrix points = pqmc::sobol(m, 2).values();
  return pqmc::make_weighted_sample(points, pqmc::target_log_densities(points, target));
}

void BM_Sobol(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pqmc::sobol(n, p));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sobol)->Args({1024, 2})->Args({1024, 10})->Args({16384, 21});

void BM_OwenScramble(benchmark::State& state) {
  const auto points = pqmc::sobol(static_cast<std::size_t>(state.range(0)), 10);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pqmc::owen_scramble(points, pqmc::ScrambleSeed{++seed}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OwenScramble)->Arg(20)->Arg(1024);

void BM_DmWeights(benchmark::State& state) {
  const auto k_count = static_cast<std::size_t>(state.range(0));
  const std::size_t j_count = 1000 / k_count;
  const auto centers = pqmc::sobol(k_count, 2);
  std::vector<pqmc::GaussianProposal> proposals;
  for (std::size_t k = 0; k < k_count; ++k) {
    proposals.emplace_back(centers.values().row(static_cast<Eigen::Index>(k)).transpose(),
                           0.04 * pqmc::Matrix::Identity(2, 2));
  }
  const pqmc::PointMatrix points = pqmc::sobol(k_count * j_count, 2).values();
  const auto target = pqmc::make_mixture_target(pqmc::five_normal_mixture_2d());
  for (auto _ : state) {
    benchmark::DoNotOptimize(pqmc::dm_weights(points, proposals, target));
  }
}
BENCHMARK(BM_DmWeights)->Arg(20)->Arg(50)->Arg(100);

void BM_PairwiseDistances(benchmark::State& state) {
  const pqmc::PointMatrix points = pqmc::sobol(static_cast<std::size_t>(state.range(0)), 2).values();
  for (auto _ : state) {
    benchmark::DoNotOptimize(pqmc::pairwise_distances(points));
  }
}
BENCHMARK(BM_PairwiseDistances)->Arg(1000)->Arg(2000);

void BM_IspResample(benchmark::State& state) {
  const auto sample = mixture_sample(static_cast<std::size_t>(state.range(0)));
  pqmc::ResampleConfig cfg;
  cfg.n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pqmc::isp_select(sample, cfg));
  }
}
BENCHMARK(BM_IspResample)->Args({1000, 50})->Args({1000, 100})->Unit(benchmark::kMillisecond);

void BM_SystematicResample(benchmark::State& state) {
  const auto sample = mixture_sample(1000);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pqmc::systematic_indices(sample.w_bar, 100, ++seed));
  }
}
BENCHMARK(BM_SystematicResample);

void BM_PqmcRun2d(benchmark::State& state) {
  const auto target = pqmc::make_mixture_target(pqmc::five_normal_mixture_2d());
  pqmc::RunConfig cfg;
  cfg.K = 50;
  cfg.J = 20;
  cfg.T = 10;
  cfg.sigma0 = 0.2;
  cfg.sampler = pqmc::Sampler::kQmc;
  cfg.resampler = pqmc::Resampler::kIsp;
  cfg.adapt.mode = pqmc::AdaptMode::kLookback;
  cfg.adapt.isotropic = true;
  for (auto _ : state) {
    cfg.seed++;
    benchmark::DoNotOptimize(pqmc::run_pqmc(cfg, target));
  }
}
BENCHMARK(BM_PqmcRun2d)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
