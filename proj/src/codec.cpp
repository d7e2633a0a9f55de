// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/codec.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace snrdiff {

LinearCodec::LinearCodec(Eigen::MatrixXd basis, Eigen::VectorXd data_mean,
                         Eigen::VectorXd latent_scale, double gamma_bar)
    : basis_(std::move(basis)),
      mean_(std::move(data_mean)),
      scale_(std::move(latent_scale)),
      gamma_bar_(gamma_bar) {
  if (basis_.cols() != mean_.size() || basis_.rows() != scale_.size()) {
    throw Error(Errc::dimension_mismatch, "LinearCodec: inconsistent basis/mean/scale shapes");
  }
  if (!(gamma_bar_ > 0.0) || !(scale_.array() > 0.0).all()) {
    throw Error(Errc::invalid_input, "LinearCodec: scales and gamma_bar must be positive");
  }
}

LinearCodec LinearCodec::fit(std::span<const Vec> samples, std::size_t latent_dim) {
  if (samples.empty()) throw Error(Errc::fit, "no training samples");
  const std::size_t n = samples.front().size();
  if (latent_dim == 0 || latent_dim >= n) {
    throw Error(Errc::fit, "latent dimension " + std::to_string(latent_dim) +
                               " must satisfy 0 < d < n = " + std::to_string(n));
  }
  const auto rows = static_cast<Eigen::Index>(samples.size());
  const auto cols = static_cast<Eigen::Index>(n);
  const auto d = static_cast<Eigen::Index>(latent_dim);

  Eigen::MatrixXd data(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vec& x = samples[static_cast<std::size_t>(r)];
    if (x.size() != n) throw Error(Errc::fit, "ragged training samples");
    if (!all_finite(x)) throw Error(Errc::fit, "non-finite training sample");
    data.row(r) = Eigen::Map<const Eigen::RowVectorXd>(x.data(), cols);
  }
  const Eigen::VectorXd mean = data.colwise().mean().transpose();
  data.rowwise() -= mean.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = 1e-10 * static_cast<double>(std::max(rows, cols)) * top;
  if (sv.size() < d || !(top > 0.0) || sv(d - 1) <= tol) {
    throw Error(Errc::fit, "training data spans fewer than " + std::to_string(latent_dim) +
                               " independent directions");
  }

  Eigen::MatrixXd basis = svd.matrixV().leftCols(d).transpose();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (std::abs(basis(i, j)) > 1e-12) {
        if (basis(i, j) < 0.0) basis.row(i) *= -1.0;
        break;
      }
    }
  }

  const Eigen::MatrixXd raw = basis * data.transpose();  // d x N
  const Eigen::VectorXd energy = raw.rowwise().squaredNorm() / static_cast<double>(rows);
  const Eigen::VectorXd scale = energy.cwiseSqrt().cwiseInverse();
  const double gamma_bar =
      (scale.asDiagonal() * raw).squaredNorm() / static_cast<double>(rows * d);
  return LinearCodec(std::move(basis), mean, scale, gamma_bar);
}

Vec LinearCodec::encode(ConstSpan x) const {
  if (x.size() != data_dim()) {
    throw Error(Errc::dimension_mismatch, "encode: expected " + std::to_string(data_dim()) +
                                              " values, got " + std::to_string(x.size()));
  }
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd z = scale_.cwiseProduct(basis_ * (xv - mean_));
  return Vec(z.data(), z.data() + z.size());
}

Vec LinearCodec::decode(ConstSpan z) const {
  if (z.size() != latent_dim()) {
    throw Error(Errc::dimension_mismatch, "decode: expected " + std::to_string(latent_dim()) +
                                              " values, got " + std::to_string(z.size()));
  }
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(z.size()));
  const Eigen::VectorXd x = basis_.transpose() * zv.cwiseQuotient(scale_) + mean_;
  return Vec(x.data(), x.data() + x.size());
}

}  // namespace snrdiff
