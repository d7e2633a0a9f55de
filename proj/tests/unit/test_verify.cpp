// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "snrdiff/harness/verify.hpp"

namespace snrdiff {
namespace {

const std::vector<CheckResult>& default_report() {
  static const auto report = run_verify_theory(ExperimentConfig{});
  return report;
}

TEST(VerifyTheory, DefaultRunPasses) {
  const auto& report = default_report();
  EXPECT_GE(report.size(), 20u);
  for (const auto& c : report) EXPECT_TRUE(c.pass) << c.name << " value " << c.value << " tol " << c.tolerance;
  EXPECT_TRUE(all_pass(report));
  std::set<std::string> names;
  for (const auto& c : report) EXPECT_TRUE(names.insert(c.name).second) << c.name;
}

TEST(VerifyTheory, CsvReport) {
  const std::string csv = to_csv(default_report());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "check,tolerance,value,verdict");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), default_report().size() + 1);
  EXPECT_NE(csv.find("timestep_root_residual,"), std::string::npos);
  EXPECT_EQ(csv.find(",fail\n"), std::string::npos);
}

TEST(VerifyTheory, FlippedAlphaSignFailsMomentAlignment) {
  ExperimentConfig cfg;
  cfg.inject_alpha_sign_bug = true;
  const auto report = run_verify_theory(cfg);
  EXPECT_FALSE(all_pass(report));
  bool moment_failed = false;
  for (const auto& c : report) {
    if (c.name.starts_with("moment_alignment") && !c.pass) moment_failed = true;
    if (c.name.starts_with("timestep_")) EXPECT_TRUE(c.pass) << c.name;
  }
  EXPECT_TRUE(moment_failed);
  EXPECT_NE(to_csv(report).find(",fail\n"), std::string::npos);
}

}  // namespace
}  // namespace snrdiff
