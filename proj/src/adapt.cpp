// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/adapt.hpp"

#include <cmath>
#include <string>

namespace snrdiff {

void ChannelSpec::validate() const {
  if (!(std::isfinite(sigma2) && sigma2 > 0.0)) {
    throw Error(Errc::domain, "sigma2 must be positive, got " + std::to_string(sigma2));
  }
  if (!(std::isfinite(gamma) && gamma > 0.0)) {
    throw Error(Errc::domain, "gamma must be positive, got " + std::to_string(gamma));
  }
  if (!(std::isfinite(y_energy) && y_energy >= 0.0)) {
    throw Error(Errc::domain, "y_energy must be non-negative, got " + std::to_string(y_energy));
  }
}

double compute_phi(const ChannelSpec& spec, PhiPolicy policy) {
  spec.validate();
  const double excess = spec.y_energy - spec.sigma2;
  if (excess < 0.0) {
    if (policy == PhiPolicy::clamp_to_zero) return 0.0;
    throw Error(Errc::negative_energy, "measured energy " + std::to_string(spec.y_energy) +
                                           " is below the noise floor " +
                                           std::to_string(spec.sigma2));
  }
  return excess / (spec.gamma * spec.sigma2);
}

Timestep timestep_for_phi(double phi) {
  if (!(phi >= 0.0) || std::isnan(phi)) {
    throw Error(Errc::domain, "phi must be >= 0, got " + std::to_string(phi));
  }
  if (std::isinf(phi)) return Timestep(0.0);
  // t_- = 1 / t_+ since the roots multiply to 1; no cancellation for large phi.
  return Timestep(2.0 / (2.0 + phi + std::sqrt(phi * phi + 4.0 * phi)));
}

Timestep timestep_simplified(double sigma2) {
  if (!(sigma2 > 0.0) || std::isnan(sigma2)) {
    throw Error(Errc::domain, "sigma2 must be positive, got " + std::to_string(sigma2));
  }
  if (std::isinf(sigma2)) return Timestep(1.0);
  return Timestep(2.0 * sigma2 / (2.0 * sigma2 + 1.0 + std::sqrt(1.0 + 4.0 * sigma2)));
}

double scaling_factor(const ChannelSpec& spec, Timestep t) {
  spec.validate();
  const double keep = 1.0 - t.value();
  return std::sqrt((keep * keep * spec.gamma + t.value()) / (spec.gamma + spec.sigma2));
}

ReceiverParams receiver_params(const ChannelSpec& spec, PhiPolicy policy) {
  const double phi = compute_phi(spec, policy);
  const Timestep t = timestep_for_phi(phi);
  const double alpha = scaling_factor(spec, t);

  const double consistent = spec.gamma + spec.sigma2;
  if (std::abs(spec.y_energy - consistent) <= 1e-12 * consistent &&
      std::abs(alpha - (1.0 - t.value())) > 1e-9) {
    throw Error(Errc::numerical, "alpha = " + std::to_string(alpha) +
                                     " departs from 1 - t* on a consistent spec");
  }
  return ReceiverParams{t, alpha, phi};
}

}  // namespace snrdiff
