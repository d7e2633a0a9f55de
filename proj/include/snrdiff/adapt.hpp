// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Closed-form receiver adaptation: the SNR-matched diffusion timestep and the
// scaling factor that aligns the received second moment with x_t.
//
// All energies are per-dimension second moments (total energy / d).
#pragma once

#include "snrdiff/schedule.hpp"

namespace snrdiff {

struct ChannelSpec {
  double sigma2 = 1.0;    // per-dimension noise variance
  double gamma = 1.0;     // per-dimension clean latent energy
  double y_energy = 2.0;  // measured per-dimension received energy

  /// Throws domain unless sigma2 > 0, gamma > 0, y_energy >= 0 (all finite).
  void validate() const;

  /// Spec with y_energy = gamma + sigma2.
  static ChannelSpec consistent(double gamma, double sigma2) {
    return ChannelSpec{sigma2, gamma, gamma + sigma2};
  }
};

struct ReceiverParams {
  Timestep t_star;
  double alpha = 1.0;
  double phi = 0.0;
};

enum class PhiPolicy {
  strict,         // y_energy < sigma2 is an error
  clamp_to_zero,  // y_energy < sigma2 yields phi = 0
};

/// phi = (y_energy - sigma2) / (gamma sigma2).
double compute_phi(const ChannelSpec& spec, PhiPolicy policy = PhiPolicy::strict);

/// Root of (1 - t)^2 = phi t in (0, 1], evaluated as 2 / (2 + phi + sqrt(phi^2 + 4 phi)),
/// the rationalized form of (2 + phi - sqrt(phi^2 + 4 phi)) / 2.
Timestep timestep_for_phi(double phi);

/// Unit-energy shortcut t(sigma2) = (2 sigma2 + 1 - sqrt(1 + 4 sigma2)) / (2 sigma2),
/// also evaluated in rationalized form.
Timestep timestep_simplified(double sigma2);

/// alpha = sqrt(((1 - t)^2 gamma + t) / (gamma + sigma2)).
double scaling_factor(const ChannelSpec& spec, Timestep t);

/// compute_phi -> timestep_for_phi -> scaling_factor.
ReceiverParams receiver_params(const ChannelSpec& spec, PhiPolicy policy = PhiPolicy::strict);

}  // namespace snrdiff
