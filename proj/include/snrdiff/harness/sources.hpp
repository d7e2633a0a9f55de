// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Data sources for experiments. Synthetic sources are Gaussian mixtures in
// data space whose components have isotropic covariance; pushed through a
// linear codec they give an exact diagonal GMM prior in latent space.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "snrdiff/codec.hpp"
#include "snrdiff/harness/config.hpp"
#include "snrdiff/metrics.hpp"
#include "snrdiff/oracle.hpp"
#include "snrdiff/parallel.hpp"
#include "snrdiff/rng.hpp"

namespace snrdiff {

/// Mixture whose components are isotropic inside the span of `subspace`
/// (orthonormal rows) and flat outside it. Means also lie in base + span.
struct DataGmm {
  std::vector<double> weights;
  std::vector<Vec> means;
  std::vector<double> variances;  // per direction of the subspace, one per component
  std::vector<Vec> subspace;
};

class DataSource {
 public:
  /// Synthetic sources vary in a `rank`-dimensional subspace of the n pixels.
  static DataSource make(const SourceSpec& spec, std::size_t data_dim, std::size_t image_width,
                         std::size_t rank);

  /// Sample `index`. Synthetic sources draw from `rng`; pgm sources cycle through their images.
  Vec sample(std::size_t index, Rng& rng) const;

  /// Sample i is drawn with Rng::stream(seed, stream, i).
  std::vector<Vec> draw(std::size_t count, std::uint64_t seed, Stream stream,
                        Exec exec = Exec::parallel) const;

  /// Every image of a pgm source, or `count` draws of a synthetic one.
  std::vector<Vec> training_corpus(std::size_t count, std::uint64_t seed) const;

  std::size_t data_dim() const { return width_ * height_; }
  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  Image as_image(Vec pixels) const { return Image{width_, height_, std::move(pixels)}; }

  const DataGmm* analytic() const { return gmm_ ? &*gmm_ : nullptr; }

 private:
  std::optional<DataGmm> gmm_;
  std::vector<Vec> images_;
  std::size_t width_ = 0;
  std::size_t height_ = 0;
};

/// Exact latent-space prior of a synthetic source under `codec`.
GmmPrior latent_gmm_prior(const DataGmm& source, const LinearCodec& codec);

/// Single Gaussian with the mixture's latent mean and per-dimension variance
/// (exact when the source has one component).
GaussianPrior latent_gaussian_prior(const DataGmm& source, const LinearCodec& codec);

/// Diagonal Gaussian fitted to sample moments.
GaussianPrior moment_fit_prior(std::span<const Vec> latents);

}  // namespace snrdiff
