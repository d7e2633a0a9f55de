// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/error.hpp"

namespace snrdiff {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_input: return "invalid input";
    case Errc::invalid_plan: return "invalid plan";
    case Errc::degenerate_timestep: return "degenerate timestep";
    case Errc::domain: return "domain error";
    case Errc::negative_energy: return "negative energy";
    case Errc::numerical: return "numerical error";
    case Errc::training: return "training error";
    case Errc::fit: return "fit error";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::parse: return "parse error";
    case Errc::config: return "config error";
    case Errc::io: return "io error";
  }
  return "error";
}

}  // namespace snrdiff
