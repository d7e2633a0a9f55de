// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/receiver.hpp"

#include "snrdiff/schedule.hpp"

namespace snrdiff {

Vec denoise_with_params(ConstSpan y, Timestep t, double alpha, const NoisePredictor& predictor,
                        const ReceiverOptions& options, Rng& rng) {
  const Vec x_t = scaled(y, alpha);
  return reverse_chain(x_t, t, options.num_steps, predictor, options.stochastic, rng);
}

Vec receive_and_denoise(const ChannelObservation& obs, double gamma,
                        const NoisePredictor& predictor, const ReceiverOptions& options,
                        Rng& rng) {
  ChannelSpec spec = obs.spec;
  spec.gamma = gamma;
  const ReceiverParams params = receiver_params(spec, options.phi_policy);
  return denoise_with_params(obs.y, params.t_star, params.alpha, predictor, options, rng);
}

std::vector<Vec> denoise_batch(std::span<const Vec> observations, Timestep t, double alpha,
                               const NoisePredictor& predictor, const ReceiverOptions& options,
                               std::uint64_t seed, Exec exec) {
  return map_indices<Vec>(observations.size(), exec, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, Stream::reverse, i);
    return denoise_with_params(observations[i], t, alpha, predictor, options, rng);
  });
}

}  // namespace snrdiff
