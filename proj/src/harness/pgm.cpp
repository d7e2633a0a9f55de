// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/harness/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "snrdiff/error.hpp"

namespace snrdiff {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t number(const char* field) {
    skip_space_and_comments();
    std::uint64_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<std::uint64_t>(bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFull) throw Error(Errc::parse, std::string("PGM ") + field + " overflows");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw Error(Errc::parse, std::string("malformed PGM header: missing ") + field);
    return static_cast<std::uint32_t>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw Error(Errc::parse, "malformed PGM header: no separator before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Image parse_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw Error(Errc::parse, "not a PGM file");
  if (bytes[1] != '5') {
    throw Error(Errc::parse, std::string("unsupported netpbm format P") + bytes[1] +
                                 " (only binary P5 is supported)");
  }
  HeaderReader header(bytes);
  const std::uint32_t width = header.number("width");
  const std::uint32_t height = header.number("height");
  const std::uint32_t maxval = header.number("maxval");
  if (width == 0 || height == 0) throw Error(Errc::parse, "PGM with zero size");
  if (maxval == 0 || maxval > 65535) throw Error(Errc::parse, "PGM maxval out of range");
  const std::size_t start = header.raster_start();

  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - std::min(bytes.size(), start) < count * sample_bytes) {
    throw Error(Errc::parse, "truncated PGM payload: expected " +
                                 std::to_string(count * sample_bytes) + " bytes");
  }
  Image img{width, height, Vec(count)};
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + start);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t v = raw[i * sample_bytes];
    if (sample_bytes == 2) v = (v << 8) | raw[i * 2 + 1];
    if (v > maxval) throw Error(Errc::parse, "PGM sample exceeds maxval");
    img.pixels[i] = static_cast<double>(v) / static_cast<double>(maxval);
  }
  return img;
}

std::string encode_pgm(const Image& image, std::uint32_t maxval) {
  if (maxval != 255 && maxval != 65535) {
    throw Error(Errc::invalid_input, "PGM maxval must be 255 or 65535");
  }
  if (image.width == 0 || image.height == 0 || image.pixels.size() != image.width * image.height) {
    throw Error(Errc::invalid_input, "encode_pgm: bad image shape");
  }
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n" + std::to_string(maxval) + "\n";
  for (double p : image.pixels) {
    const double clamped = std::clamp(std::isfinite(p) ? p : 0.0, 0.0, 1.0);
    const auto v = static_cast<std::uint32_t>(std::lround(clamped * maxval));
    if (maxval > 255) out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xFFu));
  }
  return out;
}

Image load_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

void save_pgm(const std::filesystem::path& path, const Image& image, std::uint32_t maxval) {
  const std::string bytes = encode_pgm(image, maxval);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace snrdiff
