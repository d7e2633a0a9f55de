// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers behind the CLI. Every driver is deterministic for a fixed
// config: test sample i, its channel noise and its reverse-chain noise come
// from Rng::stream(seed, {test_data, channel, reverse}, i), shared by all SNR
// points and perturbations of a run.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "snrdiff/codec.hpp"
#include "snrdiff/harness/config.hpp"
#include "snrdiff/harness/sources.hpp"
#include "snrdiff/mlp.hpp"
#include "snrdiff/parallel.hpp"
#include "snrdiff/predictor.hpp"
#include "snrdiff/receiver.hpp"

namespace snrdiff {

struct Pipeline {
  ExperimentConfig config;
  DataSource train_source;
  LinearCodec codec;
  std::shared_ptr<const NoisePredictor> predictor;  // null: decode y directly
  double gamma = 1.0;                               // codec training energy
  double peak = 1.0;
};

/// Loads or fits the codec and builds the configured noise predictor.
Pipeline build_pipeline(const ExperimentConfig& config);

struct TestSet {
  std::vector<Vec> x;           // data-space samples
  std::vector<Vec> z;           // encoded latents
  std::vector<Vec> unit_noise;  // channel noise before scaling by sigma
};

TestSet make_test_set(const DataSource& source, const LinearCodec& codec, std::size_t trials,
                      std::uint64_t seed, Exec exec = Exec::parallel);

/// y_i = z_i + sqrt(sigma2) w_i.
std::vector<Vec> observe(const TestSet& test, double sigma2);

struct PointMetrics {
  double latent_mse = 0.0;
  double latent_mse_baseline = 0.0;
  double latent_mse_stderr = 0.0;
  double rmse = 0.0;
  double psnr_db = 0.0;
  double psnr_stderr = 0.0;
  double ssim = 0.0;
  double scaled_energy = 0.0;  // per-dimension energy of alpha * y
};

/// Denoises `observations` at (t, alpha) and scores them against `test`.
PointMetrics evaluate(const Pipeline& pipeline, const DataSource& test_source, const TestSet& test,
                      const std::vector<Vec>& observations, Timestep t, double alpha, Exec exec);

struct SweepRow {
  double snr_db = 0.0;
  double sigma2 = 0.0;
  double t_star = 0.0;
  double alpha = 0.0;
  PointMetrics metrics;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

struct SensitivityRow {
  double snr_db = 0.0;
  std::string perturbed_param;  // "t" or "alpha"
  double perturbation = 0.0;    // fraction, e.g. -0.1
  double t = 0.0;
  double alpha = 0.0;
  std::optional<PointMetrics> metrics;  // empty when skipped
  std::string status;                   // "ok" or "skipped: <reason>"
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

struct OodRow {
  double snr_db = 0.0;
  std::string split;       // "in" (train source) or "ood" (test source)
  std::string gamma_mode;  // "measured" or "unit"
  double sigma2 = 0.0;
  double gamma = 0.0;  // energy fed to the timestep/scaling formulas
  double t_star = 0.0;
  double alpha = 0.0;
  double target_energy = 0.0;  // (1 - t)^2 gamma + t
  std::optional<PointMetrics> metrics;
  std::string status;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// With `previews`, also returns test sample 0 followed by its reconstruction at each SNR point.
std::vector<SweepRow> run_snr_sweep(const ExperimentConfig& config, Exec exec = Exec::parallel,
                                    std::vector<Image>* previews = nullptr);
std::vector<SensitivityRow> run_sensitivity(const ExperimentConfig& config,
                                            Exec exec = Exec::parallel);
std::vector<OodRow> run_ood_sweep(const ExperimentConfig& config, Exec exec = Exec::parallel);

struct CodecSummary {
  LinearCodec codec;
  double train_reconstruction_mse = 0.0;  // per data dimension
};
CodecSummary train_codec(const ExperimentConfig& config);

struct DenoiserSummary {
  LinearCodec codec;
  TrainResult result;
};
DenoiserSummary train_denoiser(const ExperimentConfig& config, Exec exec = Exec::parallel);

std::string to_csv(const std::vector<SweepRow>& rows);
std::string to_csv(const std::vector<SensitivityRow>& rows);
std::string to_csv(const std::vector<OodRow>& rows);
/// One row per logging window; the last window may be shorter than log_every.
std::string loss_trace_csv(const std::vector<double>& trace, std::size_t log_every,
                           std::size_t total_steps);

}  // namespace snrdiff
