// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/harness/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "snrdiff/error.hpp"

namespace snrdiff {
namespace {

constexpr std::string_view kMagic = "LTNS1";

template <class T>
void put_le(std::string& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(u & 0xFFu));
    u = static_cast<U>(u >> 8);
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }

  template <class T>
  T get(const std::string& context) {
    need(sizeof(T), context);
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u |= static_cast<std::make_unsigned_t<T>>(
          static_cast<std::make_unsigned_t<T>>(static_cast<unsigned char>(bytes_[pos_ + i]))
          << (8 * i));
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }

  std::string_view take(std::size_t n, const std::string& context) {
    need(n, context);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const std::string& context) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(Errc::parse, "truncated tensor container in " + context);
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t TensorSection::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

const TensorSection* TensorContainer::find(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const TensorSection& TensorContainer::at(std::string_view name) const {
  if (const auto* s = find(name)) return *s;
  throw Error(Errc::parse, "tensor container has no section '" + std::string(name) + "'");
}

void TensorContainer::add(std::string name, std::vector<std::uint32_t> dims,
                          std::vector<float> data) {
  TensorSection s{std::move(name), std::move(dims), std::move(data)};
  if (s.data.size() != s.element_count()) {
    throw Error(Errc::invalid_input, "section '" + s.name + "': payload does not match dims");
  }
  sections.push_back(std::move(s));
}

std::string serialize_tensor(const TensorContainer& container) {
  std::string out(kMagic);
  for (const auto& s : container.sections) {
    if (s.name.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw Error(Errc::invalid_input, "section name too long");
    }
    if (s.data.size() != s.element_count()) {
      throw Error(Errc::invalid_input, "section '" + s.name + "': payload does not match dims");
    }
    put_le(out, static_cast<std::uint16_t>(s.name.size()));
    out += s.name;
    put_le(out, static_cast<std::uint32_t>(s.dims.size()));
    for (auto d : s.dims) put_le(out, d);
    for (float f : s.data) put_le(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

TensorContainer parse_tensor(std::string_view bytes) {
  if (bytes.substr(0, kMagic.size()) != kMagic) {
    throw Error(Errc::parse, "bad magic: not an LTNS1 tensor container");
  }
  Reader in(bytes.substr(kMagic.size()));
  TensorContainer out;
  while (!in.done()) {
    const std::string where = "section #" + std::to_string(out.sections.size());
    const auto name_len = in.get<std::uint16_t>(where + " header");
    TensorSection s;
    s.name = std::string(in.take(name_len, where + " name"));
    const std::string ctx = "section '" + s.name + "'";
    const auto rank = in.get<std::uint32_t>(ctx);
    if (static_cast<std::size_t>(rank) * 4 > in.remaining()) {
      throw Error(Errc::parse, "truncated tensor container in " + ctx + " dims");
    }
    s.dims.reserve(rank);
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
      s.dims.push_back(in.get<std::uint32_t>(ctx));
      count *= s.dims.back();
    }
    if (count * 4 > in.remaining()) {
      throw Error(Errc::parse, ctx + ": payload shorter than product of dims (" +
                                   std::to_string(count) + " floats expected, " +
                                   std::to_string(in.remaining() / 4) + " available)");
    }
    s.data.resize(count);
    for (auto& f : s.data) f = std::bit_cast<float>(in.get<std::uint32_t>(ctx));
    out.sections.push_back(std::move(s));
  }
  return out;
}

void save_tensor(const std::filesystem::path& path, const TensorContainer& container) {
  const std::string bytes = serialize_tensor(container);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(Errc::io, "write failed: " + path.string());
}

TensorContainer load_tensor(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_tensor(bytes);
}

}  // namespace snrdiff
