// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "snrdiff/vec.hpp"

namespace snrdiff {

/// SplitMix64 finalizer, used only to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream splitting rule: seed(master, index) = splitmix64(master XOR splitmix64(index)).
/// Nested keys (purpose, then trial) are applied by chaining.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

/// Stream purposes used by the experiment harness.
enum class Stream : std::uint64_t {
  train_data = 1,
  test_data = 2,
  channel = 3,
  reverse = 4,
  denoiser_init = 5,
  denoiser_batches = 6,
  source_structure = 7,
  verify = 8,
};

/// Seeded generator: 64-bit Mersenne Twister with the standard library's
/// normal distribution (Marsaglia polar method in libstdc++).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t master, Stream purpose, std::uint64_t index) {
    return Rng(derive_seed(derive_seed(master, static_cast<std::uint64_t>(purpose)), index));
  }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

  Vec normal_vec(std::size_t n) {
    Vec v(n);
    for (double& x : v) x = normal();
    return v;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace snrdiff
