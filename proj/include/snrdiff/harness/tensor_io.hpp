// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// "LTNS1" tensor container. Layout, all integers little-endian:
//
//   magic    5 bytes  "LTNS1"
//   then zero or more sections until end of file, each:
//     u16          name length in bytes
//     name         UTF-8, no terminator
//     u32          rank
//     rank x u32   dims
//     payload      product(dims) x f32 (IEEE-754, little-endian), row-major
//
// A rank-0 section holds a single scalar.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace snrdiff {

struct TensorSection {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const;
};

struct TensorContainer {
  std::vector<TensorSection> sections;

  const TensorSection* find(std::string_view name) const;
  /// Throws parse if the section is missing.
  const TensorSection& at(std::string_view name) const;
  void add(std::string name, std::vector<std::uint32_t> dims, std::vector<float> data);
};

std::string serialize_tensor(const TensorContainer& container);
/// Throws parse on bad magic, truncation or dim/payload mismatch (naming the section).
TensorContainer parse_tensor(std::string_view bytes);

void save_tensor(const std::filesystem::path& path, const TensorContainer& container);
TensorContainer load_tensor(const std::filesystem::path& path);

}  // namespace snrdiff
