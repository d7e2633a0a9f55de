// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "snrdiff/schedule.hpp"
#include "snrdiff/vec.hpp"

namespace snrdiff {

/// Estimates the unit-variance noise component of x_t at time t.
/// Implementations are deterministic and safe for concurrent predict() calls.
class NoisePredictor {
 public:
  virtual ~NoisePredictor() = default;

  virtual Vec predict(ConstSpan x_t, Timestep t) const = 0;
  virtual std::size_t dim() const = 0;
};

/// Returns zeros; the receiver then reduces to x0_hat = x_t / (1 - t).
class ZeroPredictor final : public NoisePredictor {
 public:
  explicit ZeroPredictor(std::size_t dim) : dim_(dim) {}
  Vec predict(ConstSpan x_t, Timestep) const override { return Vec(x_t.size(), 0.0); }
  std::size_t dim() const override { return dim_; }

 private:
  std::size_t dim_;
};

}  // namespace snrdiff
