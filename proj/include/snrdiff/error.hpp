// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace snrdiff {

enum class Errc {
  invalid_input,
  invalid_plan,
  degenerate_timestep,
  domain,
  negative_energy,
  numerical,
  training,
  fit,
  dimension_mismatch,
  parse,
  config,
  io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace snrdiff
