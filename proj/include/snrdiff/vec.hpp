// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "snrdiff/error.hpp"

namespace snrdiff {

/// Latent vectors, data vectors and noise realizations all share this type.
using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;

inline bool all_finite(ConstSpan v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void require_same_size(ConstSpan a, ConstSpan b, const char* what) {
  if (a.size() != b.size()) {
    throw Error(Errc::dimension_mismatch, std::string(what) + ": " + std::to_string(a.size()) +
                                              " vs " + std::to_string(b.size()));
  }
}

inline double squared_norm(ConstSpan v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double squared_distance(ConstSpan a, ConstSpan b) {
  require_same_size(a, b, "squared_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline Vec scaled(ConstSpan v, double k) {
  Vec out(v.begin(), v.end());
  for (double& x : out) x *= k;
  return out;
}

}  // namespace snrdiff
