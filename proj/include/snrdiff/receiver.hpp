// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "snrdiff/adapt.hpp"
#include "snrdiff/channel.hpp"
#include "snrdiff/parallel.hpp"
#include "snrdiff/predictor.hpp"

namespace snrdiff {

struct ReceiverOptions {
  std::size_t num_steps = 1;
  bool stochastic = false;
  PhiPolicy phi_policy = PhiPolicy::strict;
};

/// Runs the reverse chain from t on the scaled observation alpha * y.
Vec denoise_with_params(ConstSpan y, Timestep t, double alpha, const NoisePredictor& predictor,
                        const ReceiverOptions& options, Rng& rng);

/// Full receiver: (sigma2, gamma, measured energy) -> (t*, alpha) -> reverse chain.
/// `gamma` overrides obs.spec.gamma and should be the training-corpus energy.
Vec receive_and_denoise(const ChannelObservation& obs, double gamma,
                        const NoisePredictor& predictor, const ReceiverOptions& options,
                        Rng& rng);

/// Batch kernel: denoises observations[i] with Rng::stream(seed, Stream::reverse, i).
/// Serial and parallel execution produce identical output.
std::vector<Vec> denoise_batch(std::span<const Vec> observations, Timestep t, double alpha,
                               const NoisePredictor& predictor, const ReceiverOptions& options,
                               std::uint64_t seed, Exec exec);

}  // namespace snrdiff
