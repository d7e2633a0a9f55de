// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/harness/sources.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "snrdiff/error.hpp"
#include "snrdiff/harness/pgm.hpp"

namespace snrdiff {
namespace {

Vec base_pattern(std::size_t width, std::size_t height) {
  Vec p(width * height);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double u = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(height);
      const double v = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(width);
      p[r * width + c] = 0.5 + 0.25 * std::sin(u) * std::cos(v);
    }
  }
  return p;
}

// Gram-Schmidt on Gaussian draws.
std::vector<Vec> orthonormal_directions(std::size_t count, std::size_t n, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, Stream::source_structure, 0);
  std::vector<Vec> dirs;
  while (dirs.size() < count) {
    Vec v = rng.normal_vec(n);
    for (const Vec& u : dirs) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += v[i] * u[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= dot * u[i];
    }
    const double norm = std::sqrt(squared_norm(v));
    if (norm < 1e-8) continue;
    for (double& x : v) x /= norm;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

std::vector<Vec> load_pgm_directory(const std::string& dir, std::size_t& width, std::size_t& height) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(Errc::config, "source.dir: no .pgm files in " + dir);
  std::vector<Vec> images;
  for (const auto& f : files) {
    Image img = load_pgm(f);
    if (images.empty()) {
      width = img.width;
      height = img.height;
    } else if (img.width != width || img.height != height) {
      throw Error(Errc::config, "source.dir: " + f.string() + " has a different size");
    }
    images.push_back(std::move(img.pixels));
  }
  return images;
}

}  // namespace

DataSource DataSource::make(const SourceSpec& spec, std::size_t data_dim, std::size_t image_width,
                            std::size_t rank) {
  DataSource src;
  if (spec.kind == SourceKind::pgm) {
    src.images_ = load_pgm_directory(spec.dir, src.width_, src.height_);
    return src;
  }
  const std::size_t width =
      image_width ? image_width
                  : static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(data_dim))));
  if (width == 0 || data_dim % width != 0) {
    throw Error(Errc::config, "data_dim is not a whole number of image rows");
  }
  src.width_ = width;
  src.height_ = data_dim / width;

  const std::size_t k = spec.kind == SourceKind::gaussian ? 1 : spec.components;
  if (rank == 0 || rank > data_dim) throw Error(Errc::config, "source rank must be in [1, data_dim]");
  if (k > 2 && k > rank) throw Error(Errc::config, "source.components exceeds the source rank");
  const Vec base = base_pattern(src.width_, src.height_);
  // Two components sit symmetrically at +/- separation along the first direction.
  auto dirs = orthonormal_directions(rank, data_dim, spec.structure_seed);

  DataGmm gmm;
  for (std::size_t c = 0; c < k; ++c) {
    Vec mean = base;
    if (k == 2) {
      const double sign = c == 0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < data_dim; ++i) mean[i] += sign * spec.separation * dirs[0][i];
    } else if (k > 2) {
      for (std::size_t i = 0; i < data_dim; ++i) mean[i] += spec.separation * dirs[c][i];
    }
    gmm.weights.push_back(1.0 / static_cast<double>(k));
    gmm.means.push_back(std::move(mean));
    gmm.variances.push_back(spec.variance);
  }
  gmm.subspace = std::move(dirs);
  src.gmm_ = std::move(gmm);
  return src;
}

Vec DataSource::sample(std::size_t index, Rng& rng) const {
  if (!gmm_) return images_[index % images_.size()];
  std::size_t k = 0;
  if (gmm_->weights.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, gmm_->weights.size() - 1);
    k = pick(rng.engine());
  }
  const double sd = std::sqrt(gmm_->variances[k]);
  Vec x = gmm_->means[k];
  for (const Vec& u : gmm_->subspace) {
    const double g = sd * rng.normal();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += g * u[i];
  }
  return x;
}

std::vector<Vec> DataSource::draw(std::size_t count, std::uint64_t seed, Stream stream,
                                  Exec exec) const {
  return map_indices<Vec>(count, exec, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, stream, i);
    return sample(i, rng);
  });
}

std::vector<Vec> DataSource::training_corpus(std::size_t count, std::uint64_t seed) const {
  if (!gmm_) return images_;
  return draw(count, seed, Stream::train_data);
}

GmmPrior latent_gmm_prior(const DataGmm& source, const LinearCodec& codec) {
  // Diagonal of s^2 S B U^T U B^T S; exact when the codec spans the subspace.
  const auto r = static_cast<Eigen::Index>(source.subspace.size());
  Eigen::MatrixXd u(r, static_cast<Eigen::Index>(codec.data_dim()));
  for (Eigen::Index j = 0; j < r; ++j) {
    u.row(j) = Eigen::Map<const Eigen::RowVectorXd>(source.subspace[j].data(), u.cols());
  }
  const Eigen::VectorXd gain = (codec.latent_scale().asDiagonal() * codec.basis() * u.transpose())
                                   .rowwise()
                                   .squaredNorm();
  GmmPrior prior;
  for (std::size_t k = 0; k < source.means.size(); ++k) {
    const Vec z = codec.encode(source.means[k]);
    Vec var(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      var[i] = source.variances[k] * gain(static_cast<Eigen::Index>(i));
    }
    prior.components.push_back({source.weights[k], z, std::move(var)});
  }
  return prior;
}

GaussianPrior latent_gaussian_prior(const DataGmm& source, const LinearCodec& codec) {
  const GmmPrior gmm = latent_gmm_prior(source, codec);
  const std::size_t d = gmm.dim();
  GaussianPrior g{Vec(d, 0.0), Vec(d, 0.0)};
  for (const auto& c : gmm.components) {
    for (std::size_t i = 0; i < d; ++i) g.mean[i] += c.weight * c.mean[i];
  }
  for (const auto& c : gmm.components) {
    for (std::size_t i = 0; i < d; ++i) {
      const double off = c.mean[i] - g.mean[i];
      g.var[i] += c.weight * (c.var[i] + off * off);
    }
  }
  return g;
}

GaussianPrior moment_fit_prior(std::span<const Vec> latents) {
  const MomentDiagnostics m = moment_diagnostics(latents);
  GaussianPrior g{m.mean, Vec(m.mean.size())};
  for (std::size_t i = 0; i < g.var.size(); ++i) {
    g.var[i] = std::max(m.energy[i] - m.mean[i] * m.mean[i], 1e-12);
  }
  return g;
}

}  // namespace snrdiff
