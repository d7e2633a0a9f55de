// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/mlp.hpp"

#include <cmath>
#include <string>

namespace snrdiff {
namespace {

constexpr std::size_t kGradChunk = 32;

// Forward pass keeping every activation; acts[0] is the network input.
std::vector<Eigen::MatrixXd> forward_trace(const std::vector<DenseLayer>& layers,
                                           Eigen::MatrixXd input) {
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(layers.size() + 1);
  acts.push_back(std::move(input));
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Eigen::MatrixXd z = layers[l].weight * acts.back();
    z.colwise() += layers[l].bias;
    if (l + 1 < layers.size()) z = z.array().tanh().matrix();
    acts.push_back(std::move(z));
  }
  return acts;
}

Eigen::MatrixXd network_input(const Eigen::MatrixXd& x_t, const Eigen::VectorXd& t) {
  Eigen::MatrixXd in(x_t.rows() + static_cast<Eigen::Index>(kTimeEmbedWidth), x_t.cols());
  in.topRows(x_t.rows()) = x_t;
  in.bottomRows(kTimeEmbedWidth) = time_embedding(t);
  return in;
}

std::vector<DenseLayer> zeros_like(const std::vector<DenseLayer>& layers) {
  std::vector<DenseLayer> out;
  out.reserve(layers.size());
  for (const auto& l : layers) {
    out.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                   Eigen::VectorXd::Zero(l.bias.size())});
  }
  return out;
}

Eigen::VectorXd flatten_layers(const std::vector<DenseLayer>& layers) {
  Eigen::Index n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  Eigen::VectorXd flat(n);
  Eigen::Index pos = 0;
  for (const auto& l : layers) {
    flat.segment(pos, l.weight.size()) = l.weight.reshaped();
    pos += l.weight.size();
    flat.segment(pos, l.bias.size()) = l.bias;
    pos += l.bias.size();
  }
  return flat;
}

// Gradient contribution of samples [lo, hi), each weighted by 1 / total.
MlpGradient chunk_gradient(const MlpPredictor& model, const TrainingBatch& batch,
                           Eigen::Index lo, Eigen::Index hi, double total) {
  const Eigen::Index cols = hi - lo;
  const Eigen::MatrixXd x0 = batch.x0.middleCols(lo, cols);
  const Eigen::MatrixXd eps = batch.eps.middleCols(lo, cols);
  const Eigen::VectorXd t = batch.t.segment(lo, cols);

  Eigen::MatrixXd x_t(x0.rows(), cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    x_t.col(j) = (1.0 - t(j)) * x0.col(j) + std::sqrt(t(j)) * eps.col(j);
  }
  const auto& layers = model.layers();
  const auto acts = forward_trace(layers, network_input(x_t, t));

  const Eigen::MatrixXd residual = acts.back() - eps;
  MlpGradient g{zeros_like(layers), residual.squaredNorm() / total};

  Eigen::MatrixXd delta = (2.0 / total) * residual;
  for (std::size_t l = layers.size(); l-- > 0;) {
    g.layers[l].weight = delta * acts[l].transpose();
    g.layers[l].bias = delta.rowwise().sum();
    if (l == 0) break;
    delta = (layers[l].weight.transpose() * delta).cwiseProduct(
        (1.0 - acts[l].array().square()).matrix());
  }
  return g;
}

}  // namespace

Eigen::MatrixXd time_embedding(const Eigen::VectorXd& t) {
  Eigen::MatrixXd emb(kTimeEmbedWidth, t.size());
  emb.row(0) = t.transpose();
  emb.row(1) = t.array().sqrt().matrix().transpose();
  emb.row(2) = (1.0 - t.array()).matrix().transpose();
  return emb;
}

Eigen::MatrixXd TrainingBatch::noisy() const {
  Eigen::MatrixXd x_t(x0.rows(), x0.cols());
  for (Eigen::Index j = 0; j < x0.cols(); ++j) {
    x_t.col(j) = (1.0 - t(j)) * x0.col(j) + std::sqrt(t(j)) * eps.col(j);
  }
  return x_t;
}

MlpPredictor::MlpPredictor(MlpShape shape, std::vector<DenseLayer> layers)
    : shape_(shape), layers_(std::move(layers)) {
  if (layers_.size() != shape_.hidden_layers + 1) {
    throw Error(Errc::invalid_input, "MlpPredictor: layer count does not match shape");
  }
  auto in = static_cast<Eigen::Index>(shape_.dim + kTimeEmbedWidth);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto out = static_cast<Eigen::Index>(l + 1 == layers_.size() ? shape_.dim
                                                                        : shape_.hidden_width);
    if (layers_[l].weight.rows() != out || layers_[l].weight.cols() != in ||
        layers_[l].bias.size() != out) {
      throw Error(Errc::dimension_mismatch, "MlpPredictor: layer " + std::to_string(l) +
                                                " has the wrong shape");
    }
    if (!layers_[l].weight.allFinite() || !layers_[l].bias.allFinite()) {
      throw Error(Errc::invalid_input, "MlpPredictor: non-finite parameters");
    }
    in = out;
  }
}

MlpPredictor MlpPredictor::initialize(const MlpShape& shape, Rng& rng, bool zero_output) {
  if (shape.dim == 0 || shape.hidden_width == 0) {
    throw Error(Errc::invalid_input, "MlpPredictor: empty shape");
  }
  std::vector<DenseLayer> layers;
  std::size_t in = shape.dim + kTimeEmbedWidth;
  for (std::size_t l = 0; l <= shape.hidden_layers; ++l) {
    const bool last = l == shape.hidden_layers;
    const std::size_t out = last ? shape.dim : shape.hidden_width;
    DenseLayer layer{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out),
                                           static_cast<Eigen::Index>(in)),
                     Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out))};
    if (!(last && zero_output)) {
      const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
        for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
          layer.weight(i, j) = limit * (2.0 * rng.uniform() - 1.0);
        }
      }
    }
    layers.push_back(std::move(layer));
    in = out;
  }
  return MlpPredictor(shape, std::move(layers));
}

Eigen::MatrixXd MlpPredictor::forward(const Eigen::MatrixXd& x_t, const Eigen::VectorXd& t) const {
  if (static_cast<std::size_t>(x_t.rows()) != shape_.dim || x_t.cols() != t.size()) {
    throw Error(Errc::dimension_mismatch, "MlpPredictor::forward");
  }
  return forward_trace(layers_, network_input(x_t, t)).back();
}

Vec MlpPredictor::predict(ConstSpan x_t, Timestep t) const {
  if (x_t.size() != shape_.dim) {
    throw Error(Errc::dimension_mismatch, "mlp predict: expected " + std::to_string(shape_.dim) +
                                              " inputs, got " + std::to_string(x_t.size()));
  }
  const Eigen::MatrixXd in =
      Eigen::Map<const Eigen::VectorXd>(x_t.data(), static_cast<Eigen::Index>(x_t.size()));
  const Eigen::MatrixXd out = forward(in, Eigen::VectorXd::Constant(1, t.value()));
  return Vec(out.data(), out.data() + out.size());
}

std::size_t MlpPredictor::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

Eigen::VectorXd MlpPredictor::flatten() const { return flatten_layers(layers_); }

void MlpPredictor::unflatten(const Eigen::VectorXd& params) {
  if (static_cast<std::size_t>(params.size()) != parameter_count()) {
    throw Error(Errc::dimension_mismatch, "MlpPredictor::unflatten");
  }
  Eigen::Index pos = 0;
  for (auto& l : layers_) {
    l.weight.reshaped() = params.segment(pos, l.weight.size());
    pos += l.weight.size();
    l.bias = params.segment(pos, l.bias.size());
    pos += l.bias.size();
  }
}

Eigen::VectorXd MlpGradient::flatten() const { return flatten_layers(layers); }

double mlp_loss(const MlpPredictor& model, const TrainingBatch& batch) {
  if (batch.size() == 0) throw Error(Errc::invalid_input, "mlp_loss: empty batch");
  const Eigen::MatrixXd pred = model.forward(batch.noisy(), batch.t);
  return (pred - batch.eps).squaredNorm() / static_cast<double>(batch.size());
}

MlpGradient mlp_gradient(const MlpPredictor& model, const TrainingBatch& batch, Exec exec) {
  const std::size_t n = batch.size();
  if (n == 0) throw Error(Errc::invalid_input, "mlp_gradient: empty batch");
  if (static_cast<std::size_t>(batch.x0.rows()) != model.dim() ||
      batch.eps.rows() != batch.x0.rows() || batch.x0.cols() != batch.eps.cols() ||
      static_cast<std::size_t>(batch.x0.cols()) != n) {
    throw Error(Errc::dimension_mismatch, "mlp_gradient: batch shape");
  }
  const std::size_t chunks = (n + kGradChunk - 1) / kGradChunk;
  const auto total = static_cast<double>(n);
  auto parts = map_indices<MlpGradient>(chunks, exec, [&](std::size_t c) {
    const auto lo = static_cast<Eigen::Index>(c * kGradChunk);
    const auto hi = static_cast<Eigen::Index>(std::min(n, (c + 1) * kGradChunk));
    return chunk_gradient(model, batch, lo, hi, total);
  });
  MlpGradient g = std::move(parts.front());
  for (std::size_t c = 1; c < parts.size(); ++c) {
    g.loss += parts[c].loss;
    for (std::size_t l = 0; l < g.layers.size(); ++l) {
      g.layers[l].weight += parts[c].layers[l].weight;
      g.layers[l].bias += parts[c].layers[l].bias;
    }
  }
  return g;
}

TrainingBatch sample_batch(std::span<const Vec> dataset, std::size_t batch_size, double t_min,
                           Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dataset.front().size());
  const auto b = static_cast<Eigen::Index>(batch_size);
  TrainingBatch batch{Eigen::MatrixXd(d, b), Eigen::MatrixXd(d, b), Eigen::VectorXd(b)};
  std::uniform_int_distribution<std::size_t> pick(0, dataset.size() - 1);
  for (Eigen::Index j = 0; j < b; ++j) {
    const Vec& x = dataset[pick(rng.engine())];
    for (Eigen::Index i = 0; i < d; ++i) batch.x0(i, j) = x[static_cast<std::size_t>(i)];
    // t ~ U(t_min, 1]: 1 - u with u in [0, 1) lands in (0, 1].
    batch.t(j) = t_min + (1.0 - t_min) * (1.0 - rng.uniform());
    for (Eigen::Index i = 0; i < d; ++i) batch.eps(i, j) = rng.normal();
  }
  return batch;
}

TrainResult mlp_train(std::span<const Vec> dataset, const MlpShape& shape,
                      const TrainConfig& config, Rng& rng, Exec exec) {
  if (dataset.empty()) throw Error(Errc::invalid_input, "mlp_train: empty dataset");
  for (const Vec& x : dataset) {
    if (x.size() != shape.dim) throw Error(Errc::dimension_mismatch, "mlp_train: dataset");
  }
  if (config.batch_size == 0 || config.log_every == 0) {
    throw Error(Errc::invalid_input, "mlp_train: batch_size and log_every must be positive");
  }
  if (!(config.t_min > 0.0 && config.t_min < 1.0)) {
    throw Error(Errc::invalid_input, "mlp_train: t_min must lie in (0, 1)");
  }

  MlpPredictor model = MlpPredictor::initialize(shape, rng);
  model.training = config;
  TrainResult result{model, {}};
  if (config.steps == 0) return result;

  Eigen::VectorXd params = model.flatten();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(params.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(params.size());
  double window = 0.0;
  std::size_t in_window = 0;

  for (std::size_t step = 1; step <= config.steps; ++step) {
    const TrainingBatch batch = sample_batch(dataset, config.batch_size, config.t_min, rng);
    const MlpGradient g = mlp_gradient(model, batch, exec);
    if (!std::isfinite(g.loss)) {
      throw Error(Errc::training, "loss became non-finite at step " + std::to_string(step) +
                                      " (last window mean " +
                                      std::to_string(in_window ? window / in_window : 0.0) + ")");
    }
    const Eigen::VectorXd grad = g.flatten();
    m = config.beta1 * m + (1.0 - config.beta1) * grad;
    v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
    params.array() -= config.learning_rate * (m.array() / c1) /
                      ((v.array() / c2).sqrt() + config.adam_eps);
    model.unflatten(params);

    window += g.loss;
    if (++in_window == config.log_every || step == config.steps) {
      result.loss_trace.push_back(window / static_cast<double>(in_window));
      window = 0.0;
      in_window = 0;
    }
  }
  result.model = std::move(model);
  return result;
}

}  // namespace snrdiff
