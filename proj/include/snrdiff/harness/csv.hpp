// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal CSV writer: LF line endings, '.' decimal separator, doubles in
// shortest round-trip form so output is byte-stable for identical values.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace snrdiff {

std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& field(double v);
  CsvWriter& field(std::uint64_t v);
  CsvWriter& field(std::string_view v);
  void end_row();

  const std::string& str() const { return out_; }

 private:
  void sep();

  std::string out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

}  // namespace snrdiff
