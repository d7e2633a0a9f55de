// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/harness/config.hpp"

#include "snrdiff/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "snrdiff/error.hpp"

namespace snrdiff {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad(std::string_view key, const std::string& why) {
  throw Error(Errc::config, "key '" + std::string(key) + "': " + why);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad(key, "expected a finite number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    bad(key, "expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, "expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(parse_double(key, trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (out.empty()) bad(key, "empty list");
  return out;
}

SourceKind parse_source_kind(std::string_view key, std::string_view v) {
  if (v == "gaussian") return SourceKind::gaussian;
  if (v == "gmm") return SourceKind::gmm;
  if (v == "pgm" || v == "pgm-directory") return SourceKind::pgm;
  bad(key, "expected gaussian, gmm or pgm, got '" + std::string(v) + "'");
}

DenoiserKind parse_denoiser(std::string_view key, std::string_view v) {
  if (v == "oracle-gaussian") return DenoiserKind::oracle_gaussian;
  if (v == "oracle-gmm") return DenoiserKind::oracle_gmm;
  if (v == "mlp") return DenoiserKind::mlp;
  if (v == "none") return DenoiserKind::none;
  bad(key, "expected oracle-gaussian, oracle-gmm, mlp or none, got '" + std::string(v) + "'");
}

bool apply_source_key(SourceSpec& s, std::string_view field, std::string_view key,
                      std::string_view v) {
  if (field.empty()) {
    s.kind = parse_source_kind(key, v);
  } else if (field == "components") {
    s.components = parse_u64(key, v);
  } else if (field == "separation") {
    s.separation = parse_double(key, v);
  } else if (field == "variance") {
    s.variance = parse_double(key, v);
  } else if (field == "seed") {
    s.structure_seed = parse_u64(key, v);
  } else if (field == "dir") {
    s.dir = std::string(v);
  } else {
    return false;
  }
  return true;
}

void validate_source(const SourceSpec& s, std::string_view prefix) {
  const std::string p(prefix);
  if (s.kind == SourceKind::pgm) {
    if (s.dir.empty()) bad(p + ".dir", "required for pgm sources");
    if (!std::filesystem::is_directory(s.dir)) bad(p + ".dir", "not a directory: " + s.dir);
    return;
  }
  if (s.components == 0) bad(p + ".components", "must be >= 1");
  if (s.kind == SourceKind::gaussian && s.components != 1) {
    bad(p + ".components", "a gaussian source has exactly one component");
  }
  if (!(s.variance > 0.0)) bad(p + ".variance", "must be positive");
  if (s.separation < 0.0) bad(p + ".separation", "must be non-negative");
}

void require_file(std::string_view key, const std::string& path) {
  if (path.empty()) bad(key, "required");
  if (!std::filesystem::is_regular_file(path)) bad(key, "no such file: " + path);
}

}  // namespace

const std::vector<std::string_view> kConfigKeys = {
    "experiment",          "source",
    "source.components",   "source.separation",
    "source.variance",     "source.seed",
    "source.dir",          "test_source",
    "test_source.components", "test_source.separation",
    "test_source.variance", "test_source.seed",
    "test_source.dir",     "latent_dim",
    "data_dim",            "image_width",
    "train_samples",       "snr_db",
    "perturbations",       "denoiser",
    "denoiser.checkpoint", "codec.checkpoint",
    "num_steps",           "stochastic",
    "trials",              "seed",
    "output",              "peak",
    "phi_clamp",           "inject_alpha_sign_bug",
    "energy_estimate",
    "mlp.hidden_width",    "mlp.hidden_layers",
    "mlp.steps",           "mlp.batch_size",
    "mlp.learning_rate",   "mlp.beta1",
    "mlp.beta2",           "mlp.adam_eps",
    "mlp.t_min",           "mlp.log_every",
};

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::snr_sweep: return "snr-sweep";
    case ExperimentKind::sensitivity: return "sensitivity";
    case ExperimentKind::ood_sweep: return "ood-sweep";
    case ExperimentKind::verify_theory: return "verify-theory";
    case ExperimentKind::train_codec: return "train-codec";
    case ExperimentKind::train_denoiser: return "train-denoiser";
  }
  return "?";
}

std::optional<ExperimentKind> experiment_from_string(std::string_view name) {
  for (auto k : {ExperimentKind::snr_sweep, ExperimentKind::sensitivity, ExperimentKind::ood_sweep,
                 ExperimentKind::verify_theory, ExperimentKind::train_codec,
                 ExperimentKind::train_denoiser}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, std::size_t, std::less<>> seen;
  // test_source inherits every source.* setting, so it is applied last.
  std::vector<std::pair<std::string_view, std::string_view>> test_keys;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view v = trim(line.substr(eq + 1));
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
      throw Error(Errc::config, "line " + std::to_string(line_no) + ": unknown key '" +
                                    std::string(key) + "'");
    }
    if (auto [it, fresh] = seen.emplace(std::string(key), line_no); !fresh) {
      throw Error(Errc::config, "line " + std::to_string(line_no) + ": duplicate key '" +
                                    std::string(key) + "' (first on line " +
                                    std::to_string(it->second) + ")");
    }
    if (v.empty()) bad(key, "missing value");

    if (key == "experiment") {
      cfg.kind = experiment_from_string(v);
      if (!cfg.kind) bad(key, "unknown experiment '" + std::string(v) + "'");
    } else if (key.starts_with("source")) {
      const auto field = key == "source" ? std::string_view{} : key.substr(7);
      apply_source_key(cfg.source, field, key, v);
    } else if (key.starts_with("test_source")) {
      test_keys.emplace_back(key, v);
    } else if (key == "latent_dim") {
      cfg.latent_dim = parse_u64(key, v);
    } else if (key == "data_dim") {
      cfg.data_dim = parse_u64(key, v);
    } else if (key == "image_width") {
      cfg.image_width = parse_u64(key, v);
    } else if (key == "train_samples") {
      cfg.train_samples = parse_u64(key, v);
    } else if (key == "snr_db") {
      cfg.snr_db = parse_list(key, v);
    } else if (key == "perturbations") {
      cfg.perturbations = parse_list(key, v);
      for (double& p : cfg.perturbations) p /= 100.0;
    } else if (key == "denoiser") {
      cfg.denoiser = parse_denoiser(key, v);
    } else if (key == "denoiser.checkpoint") {
      cfg.denoiser_checkpoint = std::string(v);
    } else if (key == "codec.checkpoint") {
      cfg.codec_checkpoint = std::string(v);
    } else if (key == "num_steps") {
      cfg.num_steps = parse_u64(key, v);
    } else if (key == "stochastic") {
      cfg.stochastic = parse_bool(key, v);
    } else if (key == "trials") {
      cfg.trials = parse_u64(key, v);
    } else if (key == "seed") {
      cfg.seed = parse_u64(key, v);
    } else if (key == "output") {
      cfg.output_dir = std::string(v);
    } else if (key == "peak") {
      cfg.peak = parse_double(key, v);
    } else if (key == "phi_clamp") {
      cfg.phi_clamp = parse_bool(key, v);
    } else if (key == "energy_estimate") {
      if (v == "measured") {
        cfg.nominal_energy = false;
      } else if (v == "nominal") {
        cfg.nominal_energy = true;
      } else {
        bad(key, "expected 'measured' or 'nominal', got '" + std::string(v) + "'");
      }
    } else if (key == "inject_alpha_sign_bug") {
      cfg.inject_alpha_sign_bug = parse_bool(key, v);
    } else if (key == "mlp.hidden_width") {
      cfg.mlp.hidden_width = parse_u64(key, v);
    } else if (key == "mlp.hidden_layers") {
      cfg.mlp.hidden_layers = parse_u64(key, v);
    } else if (key == "mlp.steps") {
      cfg.train.steps = parse_u64(key, v);
    } else if (key == "mlp.batch_size") {
      cfg.train.batch_size = parse_u64(key, v);
    } else if (key == "mlp.learning_rate") {
      cfg.train.learning_rate = parse_double(key, v);
    } else if (key == "mlp.beta1") {
      cfg.train.beta1 = parse_double(key, v);
    } else if (key == "mlp.beta2") {
      cfg.train.beta2 = parse_double(key, v);
    } else if (key == "mlp.adam_eps") {
      cfg.train.adam_eps = parse_double(key, v);
    } else if (key == "mlp.t_min") {
      cfg.train.t_min = parse_double(key, v);
    } else if (key == "mlp.log_every") {
      cfg.train.log_every = parse_u64(key, v);
    }
  }
  if (cfg.source.kind == SourceKind::gaussian && !seen.contains("source.components")) {
    cfg.source.components = 1;
  }
  if (!test_keys.empty()) {
    cfg.test_source = cfg.source;
    for (const auto& [key, v] : test_keys) {
      const auto field = key == "test_source" ? std::string_view{} : key.substr(12);
      apply_source_key(*cfg.test_source, field, key, v);
    }
    if (cfg.test_source->kind == SourceKind::gaussian && !seen.contains("test_source.components")) {
      cfg.test_source->components = 1;
    }
  }
  cfg.mlp.dim = cfg.latent_dim;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::config, "cannot read config file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

void ExperimentConfig::validate(ExperimentKind run_kind) const {
  if (kind && *kind != run_kind) {
    bad("experiment", "config is for '" + std::string(to_string(*kind)) +
                          "' but the command is '" + std::string(to_string(run_kind)) + "'");
  }
  if (run_kind == ExperimentKind::verify_theory) return;

  validate_source(source, "source");
  if (test_source) validate_source(*test_source, "test_source");
  if (run_kind == ExperimentKind::ood_sweep && !test_source) {
    bad("test_source", "ood-sweep needs a test source");
  }
  if (latent_dim == 0) bad("latent_dim", "must be >= 1");
  for (const auto* spec : {&source, test_source ? &*test_source : nullptr}) {
    if (spec && spec->kind == SourceKind::gmm && spec->components > 2 &&
        spec->components > latent_dim) {
      bad(spec == &source ? "source.components" : "test_source.components",
          "more than two components need components <= latent_dim");
    }
  }
  if (snr_db.empty()) bad("snr_db", "must list at least one value");
  if (source.kind != SourceKind::pgm) {
    if (latent_dim >= data_dim) bad("latent_dim", "must be smaller than data_dim");
    const std::size_t width =
        image_width ? image_width
                    : static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(data_dim))));
    if (width == 0 || data_dim % width != 0) {
      bad("image_width", "data_dim must be a whole number of image rows");
    }
    if (width < kSsimWindow || data_dim / width < kSsimWindow) {
      bad("image_width", "images must be at least " + std::to_string(kSsimWindow) + "x" +
                             std::to_string(kSsimWindow) + " for SSIM");
    }
  }
  if (train_samples < latent_dim + 1) bad("train_samples", "need more samples than latent_dim");
  if (trials == 0) bad("trials", "must be >= 1");
  if (num_steps == 0) bad("num_steps", "must be >= 1");
  if (peak && !(*peak > 0.0)) bad("peak", "must be positive");
  if (output_dir.empty()) bad("output", "must not be empty");
  for (double p : perturbations) {
    if (!(p > -1.0)) bad("perturbations", "perturbations must exceed -100%");
  }

  const bool needs_denoiser_kind = run_kind == ExperimentKind::snr_sweep ||
                                   run_kind == ExperimentKind::sensitivity ||
                                   run_kind == ExperimentKind::ood_sweep;
  if (needs_denoiser_kind) {
    if (denoiser == DenoiserKind::oracle_gmm && source.kind == SourceKind::pgm) {
      bad("denoiser", "oracle-gmm needs an analytic (gaussian or gmm) source");
    }
    if (denoiser == DenoiserKind::mlp) require_file("denoiser.checkpoint", denoiser_checkpoint);
    if ((run_kind == ExperimentKind::sensitivity || run_kind == ExperimentKind::ood_sweep) &&
        denoiser == DenoiserKind::none) {
      bad("denoiser", "this experiment needs a denoiser");
    }
  }
  if (!codec_checkpoint.empty()) require_file("codec.checkpoint", codec_checkpoint);

  if (run_kind == ExperimentKind::train_denoiser) {
    if (mlp.hidden_width == 0) bad("mlp.hidden_width", "must be >= 1");
    if (train.batch_size == 0) bad("mlp.batch_size", "must be >= 1");
    if (train.log_every == 0) bad("mlp.log_every", "must be >= 1");
    if (!(train.learning_rate > 0.0)) bad("mlp.learning_rate", "must be positive");
    if (!(train.t_min > 0.0 && train.t_min < 1.0)) bad("mlp.t_min", "must lie in (0, 1)");
    if (!(train.beta1 >= 0.0 && train.beta1 < 1.0)) bad("mlp.beta1", "must lie in [0, 1)");
    if (!(train.beta2 >= 0.0 && train.beta2 < 1.0)) bad("mlp.beta2", "must lie in [0, 1)");
    if (!(train.adam_eps > 0.0)) bad("mlp.adam_eps", "must be positive");
  }
}

}  // namespace snrdiff
