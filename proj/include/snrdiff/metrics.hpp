// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "snrdiff/vec.hpp"

namespace snrdiff {

inline constexpr double kPsnrCapDb = 100.0;
inline constexpr std::size_t kSsimWindow = 8;

/// Row-major grayscale image.
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  Vec pixels;

  double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

struct MetricsReport {
  double rmse = 0.0;
  double psnr_db = kPsnrCapDb;
  double ssim = 1.0;
  double latent_mse = 0.0;
};

double mse(ConstSpan a, ConstSpan b);
double rmse(ConstSpan a, ConstSpan b);

/// 10 log10(peak^2 / mse), capped at kPsnrCapDb (also returned for mse == 0).
double psnr_from_mse(double mse, double peak);
double psnr(ConstSpan a, ConstSpan b, double peak);

/// Mean SSIM over all valid-region uniform windows (stride 1),
/// C1 = (0.01 peak)^2, C2 = (0.03 peak)^2, population statistics per window.
double ssim(const Image& a, const Image& b, std::size_t window = kSsimWindow, double peak = 1.0);

struct MomentDiagnostics {
  Vec energy;  // per-dimension mean of x^2
  Vec mean;    // per-dimension mean of x
  double pooled_energy = 0.0;
  double pooled_mean = 0.0;
};

MomentDiagnostics moment_diagnostics(std::span<const Vec> batch);

}  // namespace snrdiff
