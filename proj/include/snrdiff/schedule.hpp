// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Continuous-time diffusion parameterization x_t = (1 - t) x0 + sqrt(t) eps,
// t in [0, 1]. Forward corruption, Brownian-bridge reverse steps and the
// single-step reconstruction.
#pragma once

#include <cstddef>

#include "snrdiff/rng.hpp"
#include "snrdiff/vec.hpp"

namespace snrdiff {

class NoisePredictor;

/// Largest timestep at which 1/(1 - t) is still evaluated.
inline constexpr double kMaxReconstructT = 1.0 - 1e-9;

/// Diffusion time in [0, 1]; 0 is clean data, 1 is pure noise.
class Timestep {
 public:
  constexpr Timestep() = default;
  explicit Timestep(double t);

  constexpr double value() const noexcept { return t_; }
  constexpr operator double() const noexcept { return t_; }

 private:
  double t_ = 0.0;
};

struct ForwardSample {
  Vec x_t;
  Timestep t;
  Vec eps;  // unit-variance noise used to build x_t
};

struct ReverseStepPlan {
  Timestep t_from;
  double dt = 0.0;
  bool stochastic = false;

  /// Throws invalid_plan unless 0 < dt <= t_from.
  void validate() const;
};

/// x_t = (1 - t) x0 + sqrt(t) eps with eps ~ N(0, I) drawn from `rng`.
ForwardSample forward_corrupt(ConstSpan x0, Timestep t, Rng& rng);

/// Same, with a caller-supplied noise realization.
Vec forward_with_noise(ConstSpan x0, Timestep t, ConstSpan eps);

/// Clean-signal estimate x0_hat = (x_t - sqrt(t) eps_hat) / (1 - t).
/// Throws degenerate_timestep for t > kMaxReconstructT and domain for t <= 0.
Vec single_step_denoise(ConstSpan x_t, Timestep t, ConstSpan eps_hat);

/// One reverse step from t to s = t - dt:
///   x_s = x_t + dt x0_hat - (dt / sqrt(t)) eps_hat + sqrt(dt (t - dt) / t) eps_tilde.
/// When s == 0 the result is x0_hat itself (every noise term vanishes).
Vec reverse_step(ConstSpan x_t, const ReverseStepPlan& plan, ConstSpan eps_hat, Rng& rng);

/// Uniform partition of [0, t_start] into `num_steps` reverse steps.
Vec reverse_chain(ConstSpan x_start, Timestep t_start, std::size_t num_steps,
                  const NoisePredictor& predictor, bool stochastic, Rng& rng);

}  // namespace snrdiff
