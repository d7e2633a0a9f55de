// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/harness/checkpoint.hpp"

#include <cmath>
#include <string>

namespace snrdiff {
namespace {

std::vector<float> to_floats(const Eigen::MatrixXd& m) {
  // Row-major payload.
  std::vector<float> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(static_cast<float>(m(r, c)));
  }
  return out;
}

Eigen::MatrixXd matrix_section(const TensorContainer& tc, const std::string& name) {
  const auto& s = tc.at(name);
  if (s.dims.size() != 2) throw Error(Errc::parse, "section '" + name + "' must be rank 2");
  Eigen::MatrixXd m(s.dims[0], s.dims[1]);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = s.data[k++];
  }
  return m;
}

Eigen::VectorXd vector_section(const TensorContainer& tc, const std::string& name) {
  const auto& s = tc.at(name);
  if (s.dims.size() != 1) throw Error(Errc::parse, "section '" + name + "' must be rank 1");
  Eigen::VectorXd v(s.dims[0]);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = s.data[static_cast<std::size_t>(i)];
  return v;
}

double scalar_section(const TensorContainer& tc, const std::string& name) {
  const auto& s = tc.at(name);
  if (!s.dims.empty()) throw Error(Errc::parse, "section '" + name + "' must be a scalar");
  return s.data.front();
}

std::size_t count_section(const TensorContainer& tc, const std::string& name) {
  const double v = scalar_section(tc, name);
  if (!(v >= 0.0) || v != std::floor(v)) {
    throw Error(Errc::parse, "section '" + name + "' must hold a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

std::uint32_t dim32(Eigen::Index n) { return static_cast<std::uint32_t>(n); }

void add_scalar(TensorContainer& tc, std::string name, double v) {
  tc.add(std::move(name), {}, {static_cast<float>(v)});
}

}  // namespace

TensorContainer codec_to_tensors(const LinearCodec& codec) {
  TensorContainer tc;
  const auto& b = codec.basis();
  tc.add("basis", {dim32(b.rows()), dim32(b.cols())}, to_floats(b));
  tc.add("mean", {dim32(codec.data_mean().size())}, to_floats(codec.data_mean()));
  tc.add("scale", {dim32(codec.latent_scale().size())}, to_floats(codec.latent_scale()));
  add_scalar(tc, "gamma_bar", codec.gamma_bar());
  return tc;
}

LinearCodec codec_from_tensors(const TensorContainer& tc) {
  return LinearCodec(matrix_section(tc, "basis"), vector_section(tc, "mean"),
                     vector_section(tc, "scale"), scalar_section(tc, "gamma_bar"));
}

TensorContainer mlp_to_tensors(const MlpPredictor& model) {
  TensorContainer tc;
  add_scalar(tc, "shape.dim", static_cast<double>(model.shape().dim));
  add_scalar(tc, "shape.hidden_width", static_cast<double>(model.shape().hidden_width));
  add_scalar(tc, "shape.hidden_layers", static_cast<double>(model.shape().hidden_layers));
  const TrainConfig& tr = model.training;
  add_scalar(tc, "train.learning_rate", tr.learning_rate);
  add_scalar(tc, "train.beta1", tr.beta1);
  add_scalar(tc, "train.beta2", tr.beta2);
  add_scalar(tc, "train.adam_eps", tr.adam_eps);
  add_scalar(tc, "train.batch_size", static_cast<double>(tr.batch_size));
  add_scalar(tc, "train.steps", static_cast<double>(tr.steps));
  add_scalar(tc, "train.t_min", tr.t_min);
  add_scalar(tc, "train.log_every", static_cast<double>(tr.log_every));
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    const auto& layer = model.layers()[l];
    const std::string prefix = "layer" + std::to_string(l);
    tc.add(prefix + ".weight", {dim32(layer.weight.rows()), dim32(layer.weight.cols())},
           to_floats(layer.weight));
    tc.add(prefix + ".bias", {dim32(layer.bias.size())}, to_floats(layer.bias));
  }
  return tc;
}

MlpPredictor mlp_from_tensors(const TensorContainer& tc) {
  MlpShape shape;
  shape.dim = count_section(tc, "shape.dim");
  shape.hidden_width = count_section(tc, "shape.hidden_width");
  shape.hidden_layers = count_section(tc, "shape.hidden_layers");
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l <= shape.hidden_layers; ++l) {
    const std::string prefix = "layer" + std::to_string(l);
    layers.push_back({matrix_section(tc, prefix + ".weight"), vector_section(tc, prefix + ".bias")});
  }
  MlpPredictor model(shape, std::move(layers));
  model.training.learning_rate = scalar_section(tc, "train.learning_rate");
  model.training.beta1 = scalar_section(tc, "train.beta1");
  model.training.beta2 = scalar_section(tc, "train.beta2");
  model.training.adam_eps = scalar_section(tc, "train.adam_eps");
  model.training.batch_size = count_section(tc, "train.batch_size");
  model.training.steps = count_section(tc, "train.steps");
  model.training.t_min = scalar_section(tc, "train.t_min");
  model.training.log_every = count_section(tc, "train.log_every");
  return model;
}

}  // namespace snrdiff
