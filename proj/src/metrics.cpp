// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace snrdiff {
namespace {

// (h + 1) x (w + 1) summed-area table of f(a, b) per pixel.
template <class F>
std::vector<double> integral(const Image& a, const Image& b, F&& f) {
  const std::size_t w = a.width + 1;
  std::vector<double> sat(w * (a.height + 1), 0.0);
  for (std::size_t r = 0; r < a.height; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < a.width; ++c) {
      row += f(a.at(r, c), b.at(r, c));
      sat[(r + 1) * w + c + 1] = sat[r * w + c + 1] + row;
    }
  }
  return sat;
}

double box(const std::vector<double>& sat, std::size_t stride, std::size_t r, std::size_t c,
           std::size_t k) {
  return sat[(r + k) * stride + c + k] - sat[r * stride + c + k] - sat[(r + k) * stride + c] +
         sat[r * stride + c];
}

void check_image(const Image& img, const char* what) {
  if (img.pixels.size() != img.width * img.height) {
    throw Error(Errc::invalid_input, std::string(what) + ": pixel count does not match shape");
  }
}

}  // namespace

double mse(ConstSpan a, ConstSpan b) {
  require_same_size(a, b, "mse");
  if (a.empty()) throw Error(Errc::invalid_input, "mse of empty vectors");
  return squared_distance(a, b) / static_cast<double>(a.size());
}

double rmse(ConstSpan a, ConstSpan b) { return std::sqrt(mse(a, b)); }

double psnr_from_mse(double mse_value, double peak) {
  if (!(peak > 0.0)) throw Error(Errc::domain, "psnr: peak must be positive");
  if (!(mse_value > 0.0)) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(peak * peak / mse_value));
}

double psnr(ConstSpan a, ConstSpan b, double peak) { return psnr_from_mse(mse(a, b), peak); }

double ssim(const Image& a, const Image& b, std::size_t window, double peak) {
  check_image(a, "ssim");
  check_image(b, "ssim");
  if (a.width != b.width || a.height != b.height) {
    throw Error(Errc::dimension_mismatch, "ssim: image shapes differ");
  }
  if (window == 0 || a.width < window || a.height < window) {
    throw Error(Errc::invalid_input, "ssim: image smaller than the " + std::to_string(window) +
                                         "-pixel window");
  }
  if (!(peak > 0.0)) throw Error(Errc::domain, "ssim: peak must be positive");

  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  const auto sa = integral(a, b, [](double x, double) { return x; });
  const auto sb = integral(a, b, [](double, double y) { return y; });
  const auto saa = integral(a, b, [](double x, double) { return x * x; });
  const auto sbb = integral(a, b, [](double, double y) { return y * y; });
  const auto sab = integral(a, b, [](double x, double y) { return x * y; });

  const std::size_t stride = a.width + 1;
  const double inv_n = 1.0 / static_cast<double>(window * window);
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r + window <= a.height; ++r) {
    for (std::size_t c = 0; c + window <= a.width; ++c) {
      const double mu_a = box(sa, stride, r, c, window) * inv_n;
      const double mu_b = box(sb, stride, r, c, window) * inv_n;
      const double var_a = box(saa, stride, r, c, window) * inv_n - mu_a * mu_a;
      const double var_b = box(sbb, stride, r, c, window) * inv_n - mu_b * mu_b;
      const double cov = box(sab, stride, r, c, window) * inv_n - mu_a * mu_b;
      total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
               ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

MomentDiagnostics moment_diagnostics(std::span<const Vec> batch) {
  if (batch.empty()) throw Error(Errc::invalid_input, "moment_diagnostics: empty batch");
  const std::size_t d = batch.front().size();
  MomentDiagnostics out{Vec(d, 0.0), Vec(d, 0.0), 0.0, 0.0};
  for (const Vec& v : batch) {
    if (v.size() != d) throw Error(Errc::dimension_mismatch, "moment_diagnostics: ragged batch");
    for (std::size_t i = 0; i < d; ++i) {
      out.mean[i] += v[i];
      out.energy[i] += v[i] * v[i];
    }
  }
  const auto n = static_cast<double>(batch.size());
  for (std::size_t i = 0; i < d; ++i) {
    out.mean[i] /= n;
    out.energy[i] /= n;
    out.pooled_mean += out.mean[i];
    out.pooled_energy += out.energy[i];
  }
  if (d > 0) {
    out.pooled_mean /= static_cast<double>(d);
    out.pooled_energy /= static_cast<double>(d);
  }
  return out;
}

}  // namespace snrdiff
