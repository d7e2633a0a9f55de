// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "snrdiff/harness/config.hpp"

namespace snrdiff {

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  double value = 0.0;
  bool pass = false;
};

/// Runs the invariant audits of the schedule, adapt, channel and denoise
/// modules. Failures are verdicts, not exceptions.
std::vector<CheckResult> run_verify_theory(const ExperimentConfig& config);

/// CSV with header check,tolerance,value,verdict.
std::string to_csv(const std::vector<CheckResult>& checks);

bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace snrdiff
