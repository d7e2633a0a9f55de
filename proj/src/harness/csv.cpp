// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/harness/csv.hpp"

#include <charconv>
#include <cmath>

#include "snrdiff/error.hpp"

namespace snrdiff {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ',';
    out_ += header[i];
  }
  out_ += '\n';
}

void CsvWriter::sep() {
  if (in_row_ == columns_) throw Error(Errc::invalid_input, "csv row has too many fields");
  if (in_row_++) out_ += ',';
}

CsvWriter& CsvWriter::field(double v) {
  sep();
  out_ += format_number(v);
  return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t v) {
  sep();
  out_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::field(std::string_view v) {
  sep();
  const bool quote = v.find_first_of(",\"\n") != std::string_view::npos;
  if (!quote) {
    out_ += v;
    return *this;
  }
  out_ += '"';
  for (char c : v) {
    if (c == '"') out_ += '"';
    out_ += c;
  }
  out_ += '"';
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw Error(Errc::invalid_input, "csv row has too few fields");
  out_ += '\n';
  in_row_ = 0;
}

}  // namespace snrdiff
