// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// snrdiff <command> [--config PATH] [--seed N] [--out DIR] [--quiet]
//
// Exit codes: 0 success, 1 config error, 2 verify-theory check failure,
// 3 any other runtime failure.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "snrdiff/error.hpp"
#include "snrdiff/harness/checkpoint.hpp"
#include "snrdiff/harness/config.hpp"
#include "snrdiff/harness/csv.hpp"
#include "snrdiff/harness/experiments.hpp"
#include "snrdiff/harness/pgm.hpp"
#include "snrdiff/harness/verify.hpp"
#include "snrdiff/parallel.hpp"

namespace fs = std::filesystem;
using namespace snrdiff;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitCheck = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(Errc::io, "short write to " + path.string());
}

class Run {
 public:
  Run(const Options& opt, ExperimentKind kind) : opt_(opt) {
    cfg_ = opt.config_path.empty() ? ExperimentConfig{} : load_config(opt.config_path);
    if (opt.seed) cfg_.seed = *opt.seed;
    if (!opt.out.empty()) cfg_.output_dir = opt.out;
    cfg_.validate(kind);
    dir_ = cfg_.output_dir;
    fs::create_directories(dir_);
  }

  const ExperimentConfig& config() const { return cfg_; }

  void emit(const std::string& name, const std::string& text) const {
    write_text(dir_ / name, text);
    say("wrote " + (dir_ / name).string());
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

  void say(const std::string& line) const {
    if (!opt_.quiet) std::cout << line << '\n';
  }

 private:
  const Options& opt_;
  ExperimentConfig cfg_;
  fs::path dir_;
};

int train_codec_cmd(const Options& opt) {
  Run run(opt, ExperimentKind::train_codec);
  const CodecSummary s = train_codec(run.config());
  save_codec(run.path("codec.ltns"), s.codec);
  run.say("wrote " + run.path("codec.ltns").string());
  run.say("gamma_bar " + format_number(s.codec.gamma_bar()) + ", train reconstruction mse " +
          format_number(s.train_reconstruction_mse));
  return 0;
}

int train_denoiser_cmd(const Options& opt) {
  Run run(opt, ExperimentKind::train_denoiser);
  const DenoiserSummary s = train_denoiser(run.config());
  save_mlp(run.path("denoiser.ltns"), s.result.model);
  run.say("wrote " + run.path("denoiser.ltns").string());
  if (run.config().codec_checkpoint.empty()) {
    save_codec(run.path("codec.ltns"), s.codec);
    run.say("wrote " + run.path("codec.ltns").string());
  }
  run.emit("loss_trace.csv", loss_trace_csv(s.result.loss_trace, run.config().train.log_every,
                                                   run.config().train.steps));
  if (!s.result.loss_trace.empty()) {
    run.say("final window loss " + format_number(s.result.loss_trace.back()));
  }
  return 0;
}

int snr_sweep_cmd(const Options& opt) {
  Run run(opt, ExperimentKind::snr_sweep);
  std::vector<Image> previews;
  const auto rows = run_snr_sweep(run.config(), Exec::parallel, &previews);
  run.emit("snr_sweep.csv", to_csv(rows));
  fs::create_directories(run.path("images"));
  save_pgm(run.path("images") / "clean.pgm", previews.front());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    save_pgm(run.path("images") / ("snr_" + format_number(rows[i].snr_db) + "dB.pgm"),
             previews[i + 1]);
  }
  for (const auto& r : rows) {
    run.say("snr " + format_number(r.snr_db) + " dB: t* " + format_number(r.t_star) +
            ", latent mse " + format_number(r.metrics.latent_mse) + " (baseline " +
            format_number(r.metrics.latent_mse_baseline) + "), psnr " +
            format_number(r.metrics.psnr_db) + " dB");
  }
  return 0;
}

int sensitivity_cmd(const Options& opt) {
  Run run(opt, ExperimentKind::sensitivity);
  run.emit("sensitivity.csv", to_csv(run_sensitivity(run.config())));
  return 0;
}

int ood_sweep_cmd(const Options& opt) {
  Run run(opt, ExperimentKind::ood_sweep);
  run.emit("ood_sweep.csv", to_csv(run_ood_sweep(run.config())));
  return 0;
}

int verify_cmd(const Options& opt) {
  Run run(opt, ExperimentKind::verify_theory);
  const auto checks = run_verify_theory(run.config());
  run.emit("verify_theory.csv", to_csv(checks));
  for (const auto& c : checks) {
    run.say((c.pass ? "PASS " : "FAIL ") + c.name + " value " + format_number(c.value) +
            " tolerance " + format_number(c.tolerance));
  }
  return all_pass(checks) ? 0 : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel-matched latent diffusion denoising experiments"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "master seed (overrides the config)");
    sub->add_option("--out", opt.out, "output directory (overrides the config)");
    sub->add_flag("--quiet", opt.quiet, "suppress progress output");
  };

  using Command = int (*)(const Options&);
  std::vector<std::pair<CLI::App*, Command>> commands{
      {app.add_subcommand("train-codec", "fit the PCA codec"), train_codec_cmd},
      {app.add_subcommand("train-denoiser", "train the MLP noise predictor"), train_denoiser_cmd},
      {app.add_subcommand("snr-sweep", "metrics across the SNR grid"), snr_sweep_cmd},
      {app.add_subcommand("sensitivity", "perturb t* and alpha"), sensitivity_cmd},
      {app.add_subcommand("ood-sweep", "evaluate on a second source"), ood_sweep_cmd},
      {app.add_subcommand("verify-theory", "run the invariant audits"), verify_cmd},
  };
  for (auto& [sub, fn] : commands) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (auto& [sub, fn] : commands) {
      if (sub->parsed()) return fn(opt);
    }
  } catch (const Error& e) {
    std::cerr << "snrdiff: " << e.what() << '\n';
    const bool config_error = e.code() == Errc::config || e.code() == Errc::parse;
    return config_error ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "snrdiff: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
