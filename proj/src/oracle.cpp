// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace snrdiff {
namespace {

void require_open_unit(Timestep t) {
  if (!(t.value() > 0.0 && t.value() < 1.0)) {
    throw Error(Errc::domain, "oracle predictors need 0 < t < 1, got " + std::to_string(t.value()));
  }
}

void validate_diag(const Vec& mean, const Vec& var, const char* what) {
  if (mean.size() != var.size()) throw Error(Errc::dimension_mismatch, what);
  for (double v : var) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(Errc::domain, std::string(what) + ": variances must be positive");
    }
  }
  if (!all_finite(mean)) throw Error(Errc::domain, std::string(what) + ": non-finite mean");
}

// E[x0 | x_t] per component of a diagonal Gaussian, written into `out`.
void component_posterior(const Vec& mean, const Vec& var, ConstSpan x_t, double t, Vec& out) {
  const double keep = 1.0 - t;
  for (std::size_t i = 0; i < x_t.size(); ++i) {
    const double gain = keep * var[i] / (keep * keep * var[i] + t);
    out[i] = mean[i] + gain * (x_t[i] - keep * mean[i]);
  }
}

Vec eps_from_x0(ConstSpan x_t, ConstSpan x0_hat, double t) {
  const double keep = 1.0 - t;
  const double inv_noise = 1.0 / std::sqrt(t);
  Vec eps(x_t.size());
  for (std::size_t i = 0; i < x_t.size(); ++i) eps[i] = (x_t[i] - keep * x0_hat[i]) * inv_noise;
  return eps;
}

}  // namespace

void GaussianPrior::validate() const { validate_diag(mean, var, "GaussianPrior"); }

void GmmPrior::validate() const {
  if (components.empty()) throw Error(Errc::domain, "GmmPrior: no components");
  double total = 0.0;
  const std::size_t d = components.front().mean.size();
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw Error(Errc::domain, "GmmPrior: negative weight");
    if (c.mean.size() != d) throw Error(Errc::dimension_mismatch, "GmmPrior: ragged components");
    validate_diag(c.mean, c.var, "GmmPrior");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(Errc::domain, "GmmPrior: weights sum to " + std::to_string(total));
  }
}

Vec gaussian_posterior_mean(const GaussianPrior& prior, ConstSpan x_t, Timestep t) {
  require_open_unit(t);
  require_same_size(prior.mean, x_t, "gaussian oracle");
  Vec x0(x_t.size());
  component_posterior(prior.mean, prior.var, x_t, t.value(), x0);
  return x0;
}

Vec gaussian_oracle_predict(const GaussianPrior& prior, ConstSpan x_t, Timestep t) {
  const Vec x0 = gaussian_posterior_mean(prior, x_t, t);
  return eps_from_x0(x_t, x0, t.value());
}

Vec gmm_posterior_mean(const GmmPrior& prior, ConstSpan x_t, Timestep t) {
  require_open_unit(t);
  require_same_size(Vec(prior.dim()), x_t, "gmm oracle");
  const double tv = t.value();
  const double keep = 1.0 - tv;
  const std::size_t k_count = prior.components.size();

  std::vector<double> log_resp(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto& c = prior.components[k];
    double lp = std::log(c.weight);
    for (std::size_t i = 0; i < x_t.size(); ++i) {
      const double v = keep * keep * c.var[i] + tv;
      const double r = x_t[i] - keep * c.mean[i];
      lp -= 0.5 * (std::log(2.0 * std::numbers::pi * v) + r * r / v);
    }
    log_resp[k] = lp;
  }
  const double top = *std::max_element(log_resp.begin(), log_resp.end());
  if (!std::isfinite(top)) {
    throw Error(Errc::numerical, "gmm oracle: every component responsibility underflowed");
  }
  double norm = 0.0;
  for (double& lr : log_resp) {
    lr = std::exp(lr - top);
    norm += lr;
  }

  Vec x0(x_t.size(), 0.0);
  Vec part(x_t.size());
  for (std::size_t k = 0; k < k_count; ++k) {
    const double w = log_resp[k] / norm;
    if (w == 0.0) continue;
    component_posterior(prior.components[k].mean, prior.components[k].var, x_t, tv, part);
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += w * part[i];
  }
  return x0;
}

Vec gmm_oracle_predict(const GmmPrior& prior, ConstSpan x_t, Timestep t) {
  const Vec x0 = gmm_posterior_mean(prior, x_t, t);
  return eps_from_x0(x_t, x0, t.value());
}

GaussianOracle::GaussianOracle(GaussianPrior prior) : prior_(std::move(prior)) {
  prior_.validate();
}

Vec GaussianOracle::predict(ConstSpan x_t, Timestep t) const {
  return gaussian_oracle_predict(prior_, x_t, t);
}

GmmOracle::GmmOracle(GmmPrior prior) : prior_(std::move(prior)) { prior_.validate(); }

Vec GmmOracle::predict(ConstSpan x_t, Timestep t) const {
  return gmm_oracle_predict(prior_, x_t, t);
}

}  // namespace snrdiff
