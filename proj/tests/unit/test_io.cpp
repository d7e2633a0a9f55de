// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <limits>

#include <bit>
#include <cstring>
#include <cmath>
#include <filesystem>

#include "snrdiff/codec.hpp"
#include "snrdiff/harness/checkpoint.hpp"
#include "snrdiff/harness/csv.hpp"
#include "snrdiff/harness/pgm.hpp"
#include "snrdiff/harness/tensor_io.hpp"
#include "snrdiff/rng.hpp"

namespace snrdiff {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "snrdiff_unit";
  fs::create_directories(dir);
  return dir / name;
}

Errc parse_code(std::string_view bytes) {
  try {
    parse_tensor(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::io;
}

TEST(Tensor, EmptyContainerRoundTrips) {
  const std::string bytes = serialize_tensor(TensorContainer{});
  EXPECT_EQ(bytes, "LTNS1");
  EXPECT_TRUE(parse_tensor(bytes).sections.empty());
}

TEST(Tensor, MatrixRoundTripsBitExactly) {
  TensorContainer c;
  const std::vector<float> vals{1.0f, -2.5f, 3.25f, std::bit_cast<float>(0x7f7fffffu),
                                std::bit_cast<float>(0x00000001u), -0.0f};
  c.add("m", {2, 3}, vals);
  c.add("scalar", {}, {0.125f});
  const std::string bytes = serialize_tensor(c);

  std::string expected = "LTNS1";
  expected += std::string("\x01\x00", 2) + "m" + std::string("\x02\x00\x00\x00", 4) +
              std::string("\x02\x00\x00\x00\x03\x00\x00\x00", 8);
  for (float v : vals) {
    const auto u = std::bit_cast<std::uint32_t>(v);
    for (int k = 0; k < 4; ++k) expected.push_back(static_cast<char>((u >> (8 * k)) & 0xFF));
  }
  EXPECT_EQ(bytes.substr(0, expected.size()), expected);

  const TensorContainer back = parse_tensor(bytes);
  ASSERT_EQ(back.sections.size(), 2u);
  EXPECT_EQ(back.at("m").dims, (std::vector<std::uint32_t>{2, 3}));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint32_t>(back.at("m").data[i]), std::bit_cast<std::uint32_t>(vals[i]));
  }
  EXPECT_EQ(back.at("scalar").data, std::vector<float>{0.125f});
  EXPECT_EQ(serialize_tensor(back), bytes);
}

TEST(Tensor, FileRoundTrip) {
  TensorContainer c;
  c.add("a.b", {4}, {1, 2, 3, 4});
  save_tensor(scratch("t.ltns"), c);
  EXPECT_EQ(serialize_tensor(load_tensor(scratch("t.ltns"))), serialize_tensor(c));
  EXPECT_THROW(load_tensor(scratch("missing.ltns")), Error);
}

TEST(Tensor, Errors) {
  EXPECT_EQ(parse_code("LTNS2"), Errc::parse);
  EXPECT_EQ(parse_code("LTN"), Errc::parse);
  TensorContainer c;
  c.add("weights", {2, 3}, {1, 2, 3, 4, 5, 6});
  const std::string bytes = serialize_tensor(c);
  const std::string cut = bytes.substr(0, bytes.size() - 4);
  try {
    parse_tensor(cut);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse);
    EXPECT_NE(std::string(e.what()).find("weights"), std::string::npos);
  }
  EXPECT_EQ(parse_code(bytes.substr(0, 9)), Errc::parse);
  EXPECT_THROW(c.add("bad", {2, 2}, {1, 2, 3}), Error);
  EXPECT_THROW(c.at("absent"), Error);
}

TEST(Pgm, HeaderExample) {
  const std::string bytes = std::string("P5 2 2 255\n") + std::string("\x00\x80\xff\x40", 4);
  const Image img = parse_pgm(bytes);
  ASSERT_EQ(img.width, 2u);
  ASSERT_EQ(img.height, 2u);
  EXPECT_EQ(img.at(0, 0), 0.0);
  EXPECT_EQ(img.at(0, 1), 128.0 / 255.0);
  EXPECT_EQ(img.at(1, 0), 1.0);
  EXPECT_EQ(img.at(1, 1), 64.0 / 255.0);
}

TEST(Pgm, CommentsAndSixteenBit) {
  const std::string bytes = std::string("P5\n# note\n1 # w\n2\n65535\n") + std::string("\x01\x00\xff\xff", 4);
  const Image img = parse_pgm(bytes);
  EXPECT_EQ(img.at(0, 0), 256.0 / 65535.0);
  EXPECT_EQ(img.at(1, 0), 1.0);
}

TEST(Pgm, RoundTripAfterQuantization) {
  Rng rng(1);
  for (std::uint32_t maxval : {255u, 65535u}) {
    Image img{7, 5, Vec(35)};
    for (double& p : img.pixels) p = rng.uniform();
    const Image once = parse_pgm(encode_pgm(img, maxval));
    for (std::size_t i = 0; i < 35; ++i) {
      EXPECT_NEAR(once.pixels[i], img.pixels[i], 0.5 / maxval + 1e-15);
    }
    save_pgm(scratch("img.pgm"), once, maxval);
    EXPECT_EQ(load_pgm(scratch("img.pgm")).pixels, once.pixels);
    EXPECT_EQ(encode_pgm(once, maxval), encode_pgm(parse_pgm(encode_pgm(once, maxval)), maxval));
  }
}

TEST(Pgm, Errors) {
  auto code_of = [](std::string_view b) {
    try {
      parse_pgm(b);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(code_of("P2 2 2 255\n0 1 2 3").find("unsupported"), std::string::npos);
  EXPECT_NE(code_of("P5 2 2 255\n\x01\x02").find("truncated"), std::string::npos);
  EXPECT_FALSE(code_of("P5 2 255\n").empty());
  EXPECT_FALSE(code_of("P5 2 x 255\n").empty());
  EXPECT_FALSE(code_of("P5 1 1 70000\n\x00").empty());
  EXPECT_FALSE(code_of("").empty());
  EXPECT_THROW(encode_pgm(Image{1, 1, {0.5}}, 100), Error);
}

TEST(Checkpoint, CodecRoundTrip) {
  Rng rng(2);
  std::vector<Vec> data;
  for (int i = 0; i < 200; ++i) data.push_back(rng.normal_vec(9));
  const auto codec = LinearCodec::fit(data, 3);
  save_codec(scratch("codec.ltns"), codec);
  const auto back = load_codec(scratch("codec.ltns"));
  EXPECT_TRUE(back.basis().isApprox(codec.basis(), 1e-6));
  EXPECT_TRUE(back.latent_scale().isApprox(codec.latent_scale(), 1e-6));
  EXPECT_NEAR(back.gamma_bar(), codec.gamma_bar(), 1e-6);
  // A second trip through float32 is exact.
  save_codec(scratch("codec2.ltns"), back);
  EXPECT_EQ(serialize_tensor(load_tensor(scratch("codec2.ltns"))),
            serialize_tensor(load_tensor(scratch("codec.ltns"))));
}

TEST(Checkpoint, MlpRoundTrip) {
  Rng rng(3);
  auto m = MlpPredictor::initialize(MlpShape{4, 6, 2}, rng);
  m.training.steps = 1234;
  m.training.learning_rate = 5e-4;
  save_mlp(scratch("mlp.ltns"), m);
  const auto back = load_mlp(scratch("mlp.ltns"));
  EXPECT_EQ(back.shape().dim, 4u);
  EXPECT_EQ(back.shape().hidden_width, 6u);
  EXPECT_EQ(back.shape().hidden_layers, 2u);
  EXPECT_EQ(back.training.steps, 1234u);
  EXPECT_NEAR(back.training.learning_rate, 5e-4, 1e-10);
  EXPECT_TRUE(back.flatten().isApprox(m.flatten(), 1e-6));
  const Vec x = rng.normal_vec(4);
  const Vec a = m.predict(x, Timestep(0.3)), b = back.predict(x, Timestep(0.3));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], 1e-5);
}

TEST(Checkpoint, MissingSectionsAreParseErrors) {
  TensorContainer c;
  c.add("basis", {1, 2}, {1.0f, 0.0f});
  try {
    codec_from_tensors(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse);
  }
  EXPECT_THROW(mlp_from_tensors(c), Error);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(Csv, WriterLayout) {
  CsvWriter w({"a", "b"});
  w.field(1.5).field(std::string_view("x"));
  w.end_row();
  w.field(std::uint64_t{7}).field(0.25);
  w.end_row();
  EXPECT_EQ(w.str(), "a,b\n1.5,x\n7,0.25\n");
}

}  // namespace
}  // namespace snrdiff
