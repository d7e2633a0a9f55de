// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Real-valued AWGN channel on latent vectors: y = z + n, n ~ N(0, sigma2 I).
#pragma once

#include <span>

#include "snrdiff/adapt.hpp"
#include "snrdiff/parallel.hpp"
#include "snrdiff/rng.hpp"
#include "snrdiff/vec.hpp"

namespace snrdiff {

struct SnrPoint {
  double snr_db = 0.0;
  double sigma2 = 1.0;
};

struct ChannelObservation {
  Vec y;
  /// Ground-truth sigma2; y_energy holds the measured per-dimension energy of y.
  /// gamma is left at the caller's value (the channel does not know it).
  ChannelSpec spec;
};

/// sigma2 = gamma / 10^(snr_db / 10).
double snr_db_to_sigma2(double snr_db, double gamma);
double sigma2_to_snr_db(double sigma2, double gamma);

ChannelObservation transmit(ConstSpan z, double sigma2, Rng& rng, double gamma = 1.0);

/// Same channel with a caller-supplied unit-variance noise realization (n = sqrt(sigma2) w).
ChannelObservation transmit_with_noise(ConstSpan z, double sigma2, ConstSpan unit_noise,
                                       double gamma = 1.0);

/// Empirical per-dimension energy sum ||y||^2 / (N d) over a non-empty batch.
double measure_energy(std::span<const Vec> batch);

/// Chunked kernel variant of measure_energy; serial and parallel agree bit-for-bit.
double measure_energy(std::span<const Vec> batch, Exec exec);

}  // namespace snrdiff
