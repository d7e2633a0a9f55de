// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact MMSE noise predictors for diagonal Gaussian and Gaussian-mixture priors
// under the forward model x_t = (1 - t) x0 + sqrt(t) eps.
#pragma once

#include <vector>

#include "snrdiff/predictor.hpp"

namespace snrdiff {

struct GaussianPrior {
  Vec mean;
  Vec var;  // diagonal, all > 0

  void validate() const;
  std::size_t dim() const { return mean.size(); }
};

struct GmmComponent {
  double weight = 1.0;
  Vec mean;
  Vec var;
};

struct GmmPrior {
  std::vector<GmmComponent> components;

  void validate() const;
  std::size_t dim() const { return components.empty() ? 0 : components.front().mean.size(); }
};

/// Posterior mean E[x0 | x_t] for a Gaussian prior.
Vec gaussian_posterior_mean(const GaussianPrior& prior, ConstSpan x_t, Timestep t);
Vec gaussian_oracle_predict(const GaussianPrior& prior, ConstSpan x_t, Timestep t);

/// Posterior mean for a GMM prior; responsibilities are normalized in log space.
Vec gmm_posterior_mean(const GmmPrior& prior, ConstSpan x_t, Timestep t);
Vec gmm_oracle_predict(const GmmPrior& prior, ConstSpan x_t, Timestep t);

class GaussianOracle final : public NoisePredictor {
 public:
  explicit GaussianOracle(GaussianPrior prior);
  Vec predict(ConstSpan x_t, Timestep t) const override;
  std::size_t dim() const override { return prior_.dim(); }
  const GaussianPrior& prior() const { return prior_; }

 private:
  GaussianPrior prior_;
};

class GmmOracle final : public NoisePredictor {
 public:
  explicit GmmOracle(GmmPrior prior);
  Vec predict(ConstSpan x_t, Timestep t) const override;
  std::size_t dim() const override { return prior_.dim(); }
  const GmmPrior& prior() const { return prior_; }

 private:
  GmmPrior prior_;
};

}  // namespace snrdiff
