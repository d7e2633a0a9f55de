// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Linear semantic codec: principal-subspace projection followed by
// per-dimension standardization so training latents have unit energy.
#pragma once

#include <Eigen/Core>
#include <span>

#include "snrdiff/vec.hpp"

namespace snrdiff {

class LinearCodec {
 public:
  LinearCodec() = default;
  LinearCodec(Eigen::MatrixXd basis, Eigen::VectorXd data_mean, Eigen::VectorXd latent_scale,
              double gamma_bar);

  /// Fits the top-d principal subspace of `samples` (each an n-vector) via SVD.
  /// Throws fit if d >= n, samples are ragged, or fewer than d independent directions exist.
  static LinearCodec fit(std::span<const Vec> samples, std::size_t latent_dim);

  /// z = scale .* (basis (x - mean)).
  Vec encode(ConstSpan x) const;
  /// x_hat = basis^T (z ./ scale) + mean.
  Vec decode(ConstSpan z) const;

  std::size_t latent_dim() const { return static_cast<std::size_t>(basis_.rows()); }
  std::size_t data_dim() const { return static_cast<std::size_t>(basis_.cols()); }

  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::VectorXd& data_mean() const { return mean_; }
  const Eigen::VectorXd& latent_scale() const { return scale_; }
  double gamma_bar() const { return gamma_bar_; }

 private:
  Eigen::MatrixXd basis_;  // d x n, orthonormal rows
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
  double gamma_bar_ = 1.0;
};

}  // namespace snrdiff
