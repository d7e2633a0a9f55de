// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/channel.hpp"

#include <cmath>
#include <string>

namespace snrdiff {

double snr_db_to_sigma2(double snr_db, double gamma) {
  if (!(gamma > 0.0)) throw Error(Errc::domain, "gamma must be positive");
  if (!std::isfinite(snr_db)) throw Error(Errc::domain, "snr_db must be finite");
  return gamma / std::pow(10.0, snr_db / 10.0);
}

double sigma2_to_snr_db(double sigma2, double gamma) {
  if (!(gamma > 0.0) || !(sigma2 > 0.0)) throw Error(Errc::domain, "need gamma, sigma2 > 0");
  return 10.0 * std::log10(gamma / sigma2);
}

ChannelObservation transmit_with_noise(ConstSpan z, double sigma2, ConstSpan unit_noise,
                                       double gamma) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(Errc::domain, "sigma2 must be positive, got " + std::to_string(sigma2));
  }
  if (z.empty()) throw Error(Errc::invalid_input, "transmit: empty latent");
  if (!all_finite(z)) throw Error(Errc::invalid_input, "transmit: non-finite latent");
  require_same_size(z, unit_noise, "transmit");
  const double sigma = std::sqrt(sigma2);
  Vec y(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) y[i] = z[i] + sigma * unit_noise[i];
  const double energy = squared_norm(y) / static_cast<double>(y.size());
  return ChannelObservation{std::move(y), ChannelSpec{sigma2, gamma, energy}};
}

ChannelObservation transmit(ConstSpan z, double sigma2, Rng& rng, double gamma) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(Errc::domain, "sigma2 must be positive, got " + std::to_string(sigma2));
  }
  const Vec w = rng.normal_vec(z.size());
  return transmit_with_noise(z, sigma2, w, gamma);
}

double measure_energy(std::span<const Vec> batch) {
  if (batch.empty()) throw Error(Errc::invalid_input, "measure_energy: empty batch");
  const std::size_t d = batch.front().size();
  if (d == 0) throw Error(Errc::invalid_input, "measure_energy: zero-dimensional vectors");
  double total = 0.0;
  for (const Vec& y : batch) {
    if (y.size() != d) throw Error(Errc::dimension_mismatch, "measure_energy: ragged batch");
    total += squared_norm(y);
  }
  return total / (static_cast<double>(batch.size()) * static_cast<double>(d));
}

double measure_energy(std::span<const Vec> batch, Exec exec) {
  if (batch.empty()) throw Error(Errc::invalid_input, "measure_energy: empty batch");
  const std::size_t d = batch.front().size();
  if (d == 0) throw Error(Errc::invalid_input, "measure_energy: zero-dimensional vectors");
  for (const Vec& y : batch) {
    if (y.size() != d) throw Error(Errc::dimension_mismatch, "measure_energy: ragged batch");
  }
  const double total =
      chunked_sum(batch.size(), exec, [&](std::size_t i) { return squared_norm(batch[i]); });
  return total / (static_cast<double>(batch.size()) * static_cast<double>(d));
}

}  // namespace snrdiff
