// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Binary PGM ("P5") grayscale images. Pixels are mapped to [0, 1] on load
// (value / maxval) and rounded to the nearest maxval step on save. Samples
// wider than one byte are big-endian, per the netpbm format.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "snrdiff/metrics.hpp"

namespace snrdiff {

Image parse_pgm(std::string_view bytes);
std::string encode_pgm(const Image& image, std::uint32_t maxval = 255);

Image load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const Image& image, std::uint32_t maxval = 255);

}  // namespace snrdiff
