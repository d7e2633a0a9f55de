// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <limits>

#include <cmath>

#include "snrdiff/oracle.hpp"
#include "snrdiff/schedule.hpp"

namespace snrdiff {
namespace {

TEST(Timestep, RejectsOutOfRange) {
  EXPECT_NO_THROW(Timestep(0.0));
  EXPECT_NO_THROW(Timestep(1.0));
  for (double bad : {-1e-12, 1.0 + 1e-12, std::numeric_limits<double>::quiet_NaN()}) {
    try {
      Timestep t(bad);
      FAIL() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::domain);
    }
  }
}

TEST(ReverseStepPlan, Validation) {
  EXPECT_NO_THROW((ReverseStepPlan{Timestep(0.5), 0.5, false}.validate()));
  for (double dt : {0.0, -0.1, 0.6}) {
    try {
      ReverseStepPlan{Timestep(0.5), dt, false}.validate();
      FAIL() << "accepted dt " << dt;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::invalid_plan);
    }
  }
}

TEST(ForwardCorrupt, TimeZeroIsIdentity) {
  Rng rng(1);
  const Vec v{0.3, -1.7, 2.5};
  EXPECT_EQ(forward_corrupt(v, Timestep(0.0), rng).x_t, v);
}

TEST(ForwardCorrupt, TimeOneIsPureNoise) {
  Rng rng(2);
  const auto s = forward_corrupt(Vec(5, 0.0), Timestep(1.0), rng);
  EXPECT_EQ(s.x_t, s.eps);
}

TEST(ForwardCorrupt, ConstructionIsExact) {
  Rng rng(3);
  const Vec x0{1.0, -2.0, 0.5};
  const auto s = forward_corrupt(x0, Timestep(0.3), rng);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    EXPECT_DOUBLE_EQ(s.x_t[i], 0.7 * x0[i] + std::sqrt(0.3) * s.eps[i]);
  }
}

TEST(ForwardCorrupt, SecondMomentAtQuarter) {
  constexpr std::size_t d = 16, n = 100000;
  Rng rng(4);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // Unit per-dimension energy without Gaussianity: random signs.
    Vec x0(d);
    for (double& v : x0) v = rng.uniform() < 0.5 ? -1.0 : 1.0;
    acc += squared_norm(forward_corrupt(x0, Timestep(0.25), rng).x_t);
  }
  EXPECT_NEAR(acc / (n * d), 0.8125, 0.01 * 0.8125);
}

TEST(ForwardCorrupt, MarginalMeanAndVariance) {
  constexpr std::size_t n = 200000;
  const Vec x0{1.5};
  const double t = 0.4;
  Rng rng(5);
  double s = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = forward_corrupt(x0, Timestep(t), rng).x_t[0];
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.6 * 1.5, 3.0 * std::sqrt(t / n));
  EXPECT_NEAR(var, t, 3.0 * t * std::sqrt(2.0 / n));
}

TEST(SingleStep, TrueNoiseInverts) {
  Rng rng(6);
  for (int k = 0; k < 200; ++k) {
    const Vec x0 = rng.normal_vec(8);
    const Timestep t(0.01 + 0.98 * rng.uniform());
    const auto s = forward_corrupt(x0, t, rng);
    const Vec back = single_step_denoise(s.x_t, t, s.eps);
    for (std::size_t i = 0; i < x0.size(); ++i) EXPECT_NEAR(back[i], x0[i], 1e-12 * 100);
  }
}

TEST(SingleStep, HandExamples) {
  EXPECT_NEAR(single_step_denoise(Vec{1.0}, Timestep(0.381966011), Vec{0.809017})[0], 0.809017,
              1e-6);
  EXPECT_DOUBLE_EQ(single_step_denoise(Vec{0.5}, Timestep(0.5), Vec{0.0})[0], 1.0);
}

TEST(SingleStep, DegenerateTimesAreRejected) {
  try {
    single_step_denoise(Vec{1.0}, Timestep(1.0), Vec{0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate_timestep);
  }
  EXPECT_NO_THROW(single_step_denoise(Vec{1.0}, Timestep(kMaxReconstructT), Vec{0.0}));
  EXPECT_THROW(single_step_denoise(Vec{1.0}, Timestep(0.0), Vec{0.0}), Error);
  EXPECT_THROW(single_step_denoise(Vec{1.0, 2.0}, Timestep(0.5), Vec{0.0}), Error);
}

TEST(ReverseStep, TelescopesWithTrueNoise) {
  Rng rng(7);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Vec x0 = rng.normal_vec(4);
    const Timestep t(0.01 + 0.98 * rng.uniform());
    const auto s = forward_corrupt(x0, t, rng);
    const Vec out = reverse_step(s.x_t, ReverseStepPlan{t, t.value(), true}, s.eps, rng);
    for (std::size_t i = 0; i < x0.size(); ++i) worst = std::max(worst, std::abs(out[i] - x0[i]));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(ReverseStep, ZeroPredictionHandExample) {
  Rng rng(8);
  const Vec out = reverse_step(Vec{0.5}, ReverseStepPlan{Timestep(0.5), 0.5, false}, Vec{0.0}, rng);
  EXPECT_DOUBLE_EQ(out[0], 1.0);
}

// Noise coefficients of one stochastic step: (sqrt(t) - dt/sqrt(t))^2 + dt(t - dt)/t = t - dt.
TEST(ReverseStep, VarianceBookkeeping) {
  for (double t = 0.01; t <= 1.0; t += 0.01) {
    for (double f = 0.05; f <= 1.0; f += 0.05) {
      const double dt = f * t;
      const double a = std::sqrt(t) - dt / std::sqrt(t);
      EXPECT_NEAR(a * a + dt * (t - dt) / t, t - dt, 1e-12);
    }
  }
}

TEST(ReverseStep, StochasticStepWithTrueNoiseKeepsMarginal) {
  constexpr std::size_t d = 16, n = 100000;
  Rng rng(9);
  const Timestep t(0.5);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = forward_corrupt(rng.normal_vec(d), t, rng);
    acc += squared_norm(reverse_step(s.x_t, ReverseStepPlan{t, 0.25, true}, s.eps, rng));
  }
  EXPECT_NEAR(acc / (n * d), 0.8125, 0.01 * 0.8125);
}

// With the posterior-mean prediction the step shrinks toward the prior mean.
// For N(0,1) data at t = 0.5, dt = 0.25 the output variance is 31/48.
TEST(ReverseStep, StochasticStepWithMmsePrediction) {
  constexpr std::size_t d = 16, n = 100000;
  const GaussianOracle oracle(GaussianPrior{Vec(d, 0.0), Vec(d, 1.0)});
  Rng rng(10);
  const Timestep t(0.5);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = forward_corrupt(rng.normal_vec(d), t, rng);
    acc += squared_norm(
        reverse_step(s.x_t, ReverseStepPlan{t, 0.25, true}, oracle.predict(s.x_t, t), rng));
  }
  EXPECT_NEAR(acc / (n * d), 0.6458333333333333, 0.01 * 0.6458333333333333);
}

TEST(ReverseChain, OneStepMatchesSingleStepBitwise) {
  const GaussianOracle oracle(GaussianPrior{Vec(6, 0.2), Vec(6, 1.5)});
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const Vec x = rng.normal_vec(6);
    const Timestep t(0.05 + 0.9 * rng.uniform());
    const Vec a = reverse_chain(x, t, 1, oracle, false, rng);
    const Vec b = single_step_denoise(x, t, oracle.predict(x, t));
    EXPECT_EQ(a, b);
  }
}

TEST(ReverseChain, ZeroInputZeroPredictor) {
  Rng rng(12);
  const ZeroPredictor zero(5);
  for (std::size_t steps : {1u, 3u, 10u}) {
    EXPECT_EQ(reverse_chain(Vec(5, 0.0), Timestep(0.7), steps, zero, false, rng), Vec(5, 0.0));
  }
}

TEST(ReverseChain, TenStepsNearSingleStepMse) {
  constexpr std::size_t n = 100000;
  const GaussianOracle oracle(GaussianPrior{Vec{0.0}, Vec{1.0}});
  const Timestep t(0.3819660112501051);
  Rng rng(13);
  double single = 0.0, chain = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec x0{rng.normal()};
    const auto s = forward_corrupt(x0, t, rng);
    single += squared_distance(reverse_chain(s.x_t, t, 1, oracle, false, rng), x0);
    chain += squared_distance(reverse_chain(s.x_t, t, 10, oracle, false, rng), x0);
  }
  EXPECT_NEAR(chain / single, 1.0, 0.15);
}

TEST(ReverseChain, TimeZeroReturnsInput) {
  Rng rng(14);
  const ZeroPredictor zero(2);
  EXPECT_EQ(reverse_chain(Vec{1.0, 2.0}, Timestep(0.0), 4, zero, true, rng), (Vec{1.0, 2.0}));
}

TEST(ReverseChain, DimensionMismatchThrows) {
  Rng rng(15);
  const ZeroPredictor zero(3);
  try {
    reverse_chain(Vec{1.0, 2.0}, Timestep(0.5), 2, zero, false, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
  }
}

TEST(ReverseChain, FullNoiseStartIsRejected) {
  Rng rng(16);
  const GaussianOracle oracle(GaussianPrior{Vec(3, 0.0), Vec(3, 1.0)});
  EXPECT_THROW(reverse_chain(rng.normal_vec(3), Timestep(1.0), 1, oracle, false, rng), Error);
}

}  // namespace
}  // namespace snrdiff
