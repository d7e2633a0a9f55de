// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Codec and denoiser checkpoints stored as LTNS1 tensor containers.
// Parameters are narrowed to float32 by the container format.
#pragma once

#include <filesystem>

#include "snrdiff/codec.hpp"
#include "snrdiff/harness/tensor_io.hpp"
#include "snrdiff/mlp.hpp"

namespace snrdiff {

TensorContainer codec_to_tensors(const LinearCodec& codec);
LinearCodec codec_from_tensors(const TensorContainer& container);

TensorContainer mlp_to_tensors(const MlpPredictor& model);
MlpPredictor mlp_from_tensors(const TensorContainer& container);

inline void save_codec(const std::filesystem::path& p, const LinearCodec& c) {
  save_tensor(p, codec_to_tensors(c));
}
inline LinearCodec load_codec(const std::filesystem::path& p) {
  return codec_from_tensors(load_tensor(p));
}
inline void save_mlp(const std::filesystem::path& p, const MlpPredictor& m) {
  save_tensor(p, mlp_to_tensors(m));
}
inline MlpPredictor load_mlp(const std::filesystem::path& p) {
  return mlp_from_tensors(load_tensor(p));
}

}  // namespace snrdiff
