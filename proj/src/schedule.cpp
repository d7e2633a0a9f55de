// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/schedule.hpp"

#include <cmath>
#include <string>

#include "snrdiff/predictor.hpp"

namespace snrdiff {

Timestep::Timestep(double t) : t_(t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(Errc::domain, "timestep must lie in [0, 1], got " + std::to_string(t));
  }
}

void ReverseStepPlan::validate() const {
  if (!(dt > 0.0) || dt > t_from.value()) {
    throw Error(Errc::invalid_plan, "need 0 < dt <= t_from (dt = " + std::to_string(dt) +
                                        ", t_from = " + std::to_string(t_from.value()) + ")");
  }
}

Vec forward_with_noise(ConstSpan x0, Timestep t, ConstSpan eps) {
  require_same_size(x0, eps, "forward_with_noise");
  if (!all_finite(x0)) throw Error(Errc::invalid_input, "forward_corrupt: non-finite x0");
  const double signal = 1.0 - t.value();
  const double noise = std::sqrt(t.value());
  Vec x_t(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) x_t[i] = signal * x0[i] + noise * eps[i];
  return x_t;
}

ForwardSample forward_corrupt(ConstSpan x0, Timestep t, Rng& rng) {
  if (!all_finite(x0)) throw Error(Errc::invalid_input, "forward_corrupt: non-finite x0");
  Vec eps = rng.normal_vec(x0.size());
  Vec x_t = forward_with_noise(x0, t, eps);
  return ForwardSample{std::move(x_t), t, std::move(eps)};
}

Vec single_step_denoise(ConstSpan x_t, Timestep t, ConstSpan eps_hat) {
  require_same_size(x_t, eps_hat, "single_step_denoise");
  if (t.value() > kMaxReconstructT) {
    throw Error(Errc::degenerate_timestep,
                "cannot reconstruct x0 at t = " + std::to_string(t.value()));
  }
  if (!(t.value() > 0.0)) throw Error(Errc::domain, "single_step_denoise needs t > 0");
  const double noise = std::sqrt(t.value());
  const double inv_signal = 1.0 / (1.0 - t.value());
  Vec x0(x_t.size());
  for (std::size_t i = 0; i < x_t.size(); ++i) x0[i] = (x_t[i] - noise * eps_hat[i]) * inv_signal;
  return x0;
}

Vec reverse_step(ConstSpan x_t, const ReverseStepPlan& plan, ConstSpan eps_hat, Rng& rng) {
  plan.validate();
  const double t = plan.t_from.value();
  const double s = t - plan.dt;
  Vec x0_hat = single_step_denoise(x_t, plan.t_from, eps_hat);
  if (s <= 0.0) return x0_hat;

  const double dt = plan.dt;
  const double eps_coef = dt / std::sqrt(t);
  const double fresh_coef = std::sqrt(dt * s / t);
  Vec out(x_t.size());
  for (std::size_t i = 0; i < x_t.size(); ++i) {
    out[i] = x_t[i] + dt * x0_hat[i] - eps_coef * eps_hat[i];
  }
  if (plan.stochastic) {
    for (double& v : out) v += fresh_coef * rng.normal();
  }
  return out;
}

Vec reverse_chain(ConstSpan x_start, Timestep t_start, std::size_t num_steps,
                  const NoisePredictor& predictor, bool stochastic, Rng& rng) {
  if (num_steps == 0) throw Error(Errc::invalid_plan, "reverse_chain needs num_steps >= 1");
  if (x_start.size() != predictor.dim()) {
    throw Error(Errc::dimension_mismatch, "reverse_chain: predictor dimension " +
                                              std::to_string(predictor.dim()) + " vs input " +
                                              std::to_string(x_start.size()));
  }
  Vec x(x_start.begin(), x_start.end());
  if (t_start.value() == 0.0) return x;

  const auto n = static_cast<double>(num_steps);
  for (std::size_t k = 0; k < num_steps; ++k) {
    // Grid points are computed from the index so the last step lands on 0 exactly.
    const double t = t_start.value() * (n - static_cast<double>(k)) / n;
    const double s = t_start.value() * (n - static_cast<double>(k + 1)) / n;
    const Timestep tk(t);
    const Vec eps_hat = predictor.predict(x, tk);
    x = reverse_step(x, ReverseStepPlan{tk, t - s, stochastic}, eps_hat, rng);
  }
  return x;
}

}  // namespace snrdiff
