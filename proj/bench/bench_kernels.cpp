// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Serial reference path vs OpenMP path for the hot kernels.
// Arg 0 selects the path: 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include <vector>

#include "snrdiff/adapt.hpp"
#include "snrdiff/channel.hpp"
#include "snrdiff/mlp.hpp"
#include "snrdiff/oracle.hpp"
#include "snrdiff/parallel.hpp"
#include "snrdiff/receiver.hpp"
#include "snrdiff/rng.hpp"

namespace {

using namespace snrdiff;

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

std::vector<Vec> gaussian_batch(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::vector<Vec> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, Stream::test_data, i);
    out[i] = rng.normal_vec(d);
  }
  return out;
}

GmmPrior two_blobs(std::size_t d) {
  Vec plus(d, 1.0), minus(d, -1.0);
  return GmmPrior{{{0.5, plus, Vec(d, 0.25)}, {0.5, minus, Vec(d, 0.25)}}};
}

void BM_DenoiseBatch(benchmark::State& state) {
  const std::size_t d = 16;
  const auto ys = gaussian_batch(static_cast<std::size_t>(state.range(1)), d, 1);
  const GmmOracle oracle(two_blobs(d));
  const ReceiverParams rp = receiver_params(ChannelSpec::consistent(1.0, 1.0));
  ReceiverOptions opts;
  opts.num_steps = 10;
  opts.stochastic = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(denoise_batch(ys, rp.t_star, rp.alpha, oracle, opts, 1, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_DenoiseBatch)->ArgsProduct({{0, 1}, {4096}})->Unit(benchmark::kMillisecond);

void BM_MeasureEnergy(benchmark::State& state) {
  const auto ys = gaussian_batch(static_cast<std::size_t>(state.range(1)), 16, 2);
  for (auto _ : state) benchmark::DoNotOptimize(measure_energy(ys, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_MeasureEnergy)->ArgsProduct({{0, 1}, {100000}})->Unit(benchmark::kMicrosecond);

void BM_MlpGradient(benchmark::State& state) {
  Rng rng(3);
  const MlpShape shape{16, 64, 2};
  const MlpPredictor model = MlpPredictor::initialize(shape, rng);
  const auto data = gaussian_batch(4096, 16, 3);
  const TrainingBatch batch = sample_batch(data, static_cast<std::size_t>(state.range(1)), 1e-3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mlp_gradient(model, batch, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_MlpGradient)->ArgsProduct({{0, 1}, {128, 1024}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
