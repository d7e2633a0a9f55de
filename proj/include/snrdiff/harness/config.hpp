// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: flat UTF-8 "key = value" lines; '#' starts a
// comment that runs to end of line. Keys are listed in kConfigKeys; anything
// else is rejected. List values are comma separated.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snrdiff/mlp.hpp"

namespace snrdiff {

enum class ExperimentKind { snr_sweep, sensitivity, ood_sweep, verify_theory, train_codec, train_denoiser };
enum class SourceKind { gaussian, gmm, pgm };
enum class DenoiserKind { oracle_gaussian, oracle_gmm, mlp, none };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_string(std::string_view name);

struct SourceSpec {
  SourceKind kind = SourceKind::gmm;
  std::size_t components = 2;
  double separation = 2.0;  // distance of each component mean from the base pattern
  double variance = 0.25;   // isotropic per-pixel variance of every component
  std::uint64_t structure_seed = 7;
  std::string dir;  // pgm directory

  bool operator==(const SourceSpec&) const = default;
};

struct ExperimentConfig {
  std::optional<ExperimentKind> kind;
  SourceSpec source;
  std::optional<SourceSpec> test_source;
  std::size_t latent_dim = 16;
  std::size_t data_dim = 64;
  std::size_t image_width = 0;  // 0: square images, width = sqrt(data_dim)
  std::size_t train_samples = 4096;
  std::vector<double> snr_db{-10.0, -5.0, 0.0, 5.0, 10.0};
  std::vector<double> perturbations{-0.5, -0.2, -0.1, -0.05, 0.0, 0.05, 0.1, 0.2, 0.5};
  DenoiserKind denoiser = DenoiserKind::oracle_gmm;
  std::string denoiser_checkpoint;
  std::string codec_checkpoint;
  std::size_t num_steps = 1;
  bool stochastic = false;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::optional<double> peak;
  bool phi_clamp = false;
  // Receiver energy: measured over the test batch, or gamma_bar + sigma2.
  bool nominal_energy = false;
  bool inject_alpha_sign_bug = false;
  MlpShape mlp{16, 64, 2};
  TrainConfig train;

  /// Throws config naming the first offending key. Also checks that referenced
  /// directories and checkpoint files exist.
  void validate(ExperimentKind run_kind) const;
};

extern const std::vector<std::string_view> kConfigKeys;

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace snrdiff
