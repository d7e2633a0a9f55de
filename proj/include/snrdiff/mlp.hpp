// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Small tanh MLP epsilon-predictor with hand-written backpropagation and an
// Adam trainer. Input is [x_t, t, sqrt(t), 1 - t]; output is eps_hat.
#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "snrdiff/parallel.hpp"
#include "snrdiff/predictor.hpp"
#include "snrdiff/rng.hpp"

namespace snrdiff {

inline constexpr std::size_t kTimeEmbedWidth = 3;

struct MlpShape {
  std::size_t dim = 8;
  std::size_t hidden_width = 64;
  std::size_t hidden_layers = 2;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t batch_size = 128;
  std::size_t steps = 20000;
  double t_min = 1e-3;
  std::size_t log_every = 100;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
};

/// Columns are samples: x0 and eps are d x B, t has B entries.
struct TrainingBatch {
  Eigen::MatrixXd x0;
  Eigen::MatrixXd eps;
  Eigen::VectorXd t;

  std::size_t size() const { return static_cast<std::size_t>(t.size()); }
  Eigen::MatrixXd noisy() const;
};

class MlpPredictor final : public NoisePredictor {
 public:
  MlpPredictor(MlpShape shape, std::vector<DenseLayer> layers);

  /// Glorot-uniform weights, zero biases. With zero_output the last layer is
  /// all zeros, so the untrained model predicts eps_hat = 0.
  static MlpPredictor initialize(const MlpShape& shape, Rng& rng, bool zero_output = false);

  Vec predict(ConstSpan x_t, Timestep t) const override;
  std::size_t dim() const override { return shape_.dim; }

  /// Batched forward pass; x_t is d x B.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x_t, const Eigen::VectorXd& t) const;

  const MlpShape& shape() const { return shape_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  std::size_t parameter_count() const;
  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& params);

  /// Hyperparameters the model was trained with (checkpoint metadata).
  TrainConfig training;

 private:
  MlpShape shape_;
  std::vector<DenseLayer> layers_;
};

Eigen::MatrixXd time_embedding(const Eigen::VectorXd& t);

/// Mean over the batch of ||eps - eps_hat(x_t, t)||^2.
double mlp_loss(const MlpPredictor& model, const TrainingBatch& batch);

struct MlpGradient {
  std::vector<DenseLayer> layers;
  double loss = 0.0;

  Eigen::VectorXd flatten() const;
};

/// Exact gradient of mlp_loss. Samples are processed in fixed chunks whose
/// partial gradients are summed in chunk order.
MlpGradient mlp_gradient(const MlpPredictor& model, const TrainingBatch& batch,
                         Exec exec = Exec::serial);

struct TrainResult {
  MlpPredictor model;
  std::vector<double> loss_trace;  // mean loss of each log_every window
};

/// Minimizes E||eps - eps_hat((1 - t) x0 + sqrt(t) eps, t)||^2, t ~ U(t_min, 1].
/// Throws training if the loss becomes non-finite.
TrainResult mlp_train(std::span<const Vec> dataset, const MlpShape& shape,
                      const TrainConfig& config, Rng& rng, Exec exec = Exec::serial);

/// Draws a batch from `dataset` the way the trainer does.
TrainingBatch sample_batch(std::span<const Vec> dataset, std::size_t batch_size, double t_min,
                           Rng& rng);

}  // namespace snrdiff
