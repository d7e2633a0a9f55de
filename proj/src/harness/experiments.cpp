// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "snrdiff/adapt.hpp"
#include "snrdiff/channel.hpp"
#include "snrdiff/error.hpp"
#include "snrdiff/harness/checkpoint.hpp"
#include "snrdiff/harness/csv.hpp"
#include "snrdiff/metrics.hpp"
#include "snrdiff/oracle.hpp"

namespace snrdiff {
namespace {

ReceiverOptions receiver_options(const ExperimentConfig& c) {
  return ReceiverOptions{c.num_steps, c.stochastic,
                         c.phi_clamp ? PhiPolicy::clamp_to_zero : PhiPolicy::strict};
}

double data_range(const std::vector<Vec>& corpus) {
  double lo = corpus.front().front();
  double hi = lo;
  for (const Vec& x : corpus) {
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    lo = std::min(lo, *mn);
    hi = std::max(hi, *mx);
  }
  return hi > lo ? hi - lo : 1.0;
}

std::vector<Vec> encode_all(const LinearCodec& codec, const std::vector<Vec>& xs) {
  std::vector<Vec> zs;
  zs.reserve(xs.size());
  for (const Vec& x : xs) zs.push_back(codec.encode(x));
  return zs;
}

LinearCodec load_or_fit_codec(const ExperimentConfig& config, const DataSource& source,
                              const std::vector<Vec>& corpus) {
  LinearCodec codec = config.codec_checkpoint.empty()
                          ? LinearCodec::fit(corpus, config.latent_dim)
                          : load_codec(config.codec_checkpoint);
  if (codec.data_dim() != source.data_dim()) {
    throw Error(Errc::config, "codec.checkpoint: codec expects " +
                                  std::to_string(codec.data_dim()) + "-dim data, source gives " +
                                  std::to_string(source.data_dim()));
  }
  return codec;
}

void require_ssim_size(const DataSource& s) {
  if (s.width() < kSsimWindow || s.height() < kSsimWindow) {
    throw Error(Errc::config, "images must be at least " + std::to_string(kSsimWindow) + "x" +
                                  std::to_string(kSsimWindow) + " for SSIM");
  }
}

double received_energy(const ExperimentConfig& c, const std::vector<Vec>& ys, double sigma2,
                       double gamma, Exec exec) {
  return c.nominal_energy ? gamma + sigma2 : measure_energy(ys, exec);
}

}  // namespace

Pipeline build_pipeline(const ExperimentConfig& config) {
  DataSource source = DataSource::make(config.source, config.data_dim, config.image_width, config.latent_dim);
  require_ssim_size(source);
  const std::vector<Vec> corpus = source.training_corpus(config.train_samples, config.seed);
  LinearCodec codec = load_or_fit_codec(config, source, corpus);

  Pipeline p{config, std::move(source), std::move(codec), nullptr, 1.0, 1.0};
  p.gamma = p.codec.gamma_bar();
  p.peak = config.peak ? *config.peak
                       : (config.source.kind == SourceKind::pgm ? 1.0 : data_range(corpus));

  switch (config.denoiser) {
    case DenoiserKind::oracle_gmm: {
      const DataGmm* gmm = p.train_source.analytic();
      if (!gmm) throw Error(Errc::config, "denoiser: oracle-gmm needs an analytic source");
      p.predictor = std::make_shared<GmmOracle>(latent_gmm_prior(*gmm, p.codec));
      break;
    }
    case DenoiserKind::oracle_gaussian: {
      const DataGmm* gmm = p.train_source.analytic();
      p.predictor = std::make_shared<GaussianOracle>(
          gmm ? latent_gaussian_prior(*gmm, p.codec) : moment_fit_prior(encode_all(p.codec, corpus)));
      break;
    }
    case DenoiserKind::mlp: {
      auto model = std::make_shared<MlpPredictor>(load_mlp(config.denoiser_checkpoint));
      if (model->dim() != p.codec.latent_dim()) {
        throw Error(Errc::config, "denoiser.checkpoint: model dimension " +
                                      std::to_string(model->dim()) + " does not match latent_dim " +
                                      std::to_string(p.codec.latent_dim()));
      }
      p.predictor = std::move(model);
      break;
    }
    case DenoiserKind::none:
      break;
  }
  return p;
}

TestSet make_test_set(const DataSource& source, const LinearCodec& codec, std::size_t trials,
                      std::uint64_t seed, Exec exec) {
  TestSet test;
  test.x = source.draw(trials, seed, Stream::test_data, exec);
  test.z = encode_all(codec, test.x);
  const std::size_t d = codec.latent_dim();
  test.unit_noise = map_indices<Vec>(trials, exec, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, Stream::channel, i);
    return rng.normal_vec(d);
  });
  return test;
}

std::vector<Vec> observe(const TestSet& test, double sigma2) {
  std::vector<Vec> ys;
  ys.reserve(test.z.size());
  for (std::size_t i = 0; i < test.z.size(); ++i) {
    ys.push_back(transmit_with_noise(test.z[i], sigma2, test.unit_noise[i]).y);
  }
  return ys;
}

PointMetrics evaluate(const Pipeline& pipeline, const DataSource& test_source, const TestSet& test,
                      const std::vector<Vec>& observations, Timestep t, double alpha, Exec exec) {
  const ExperimentConfig& cfg = pipeline.config;
  const std::size_t n_trials = observations.size();
  const std::vector<Vec> z_hat =
      pipeline.predictor
          ? denoise_batch(observations, t, alpha, *pipeline.predictor, receiver_options(cfg),
                          cfg.seed, exec)
          : observations;

  struct TrialStats {
    double latent_se, baseline_se, data_se, ssim;
  };
  const auto d = static_cast<double>(pipeline.codec.latent_dim());
  const auto n = static_cast<double>(pipeline.codec.data_dim());
  const auto stats = map_indices<TrialStats>(n_trials, exec, [&](std::size_t i) {
    Vec x_hat = pipeline.codec.decode(z_hat[i]);
    const double dse = squared_distance(x_hat, test.x[i]);
    const double s = ssim(test_source.as_image(test.x[i]), test_source.as_image(std::move(x_hat)),
                          kSsimWindow, pipeline.peak);
    return TrialStats{squared_distance(z_hat[i], test.z[i]),
                      squared_distance(observations[i], test.z[i]), dse, s};
  });

  double latent = 0.0, latent_sq = 0.0, base = 0.0, data = 0.0, data_sq = 0.0, ssim_sum = 0.0;
  for (const auto& s : stats) {
    latent += s.latent_se / d;
    latent_sq += (s.latent_se / d) * (s.latent_se / d);
    base += s.baseline_se / d;
    data += s.data_se / n;
    data_sq += (s.data_se / n) * (s.data_se / n);
    ssim_sum += s.ssim;
  }
  const auto count = static_cast<double>(n_trials);
  auto stderr_of = [&](double sum, double sum_sq) {
    if (n_trials < 2) return 0.0;
    const double mean = sum / count;
    const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
    return std::sqrt(var / count);
  };

  PointMetrics m;
  m.latent_mse = latent / count;
  m.latent_mse_baseline = base / count;
  m.latent_mse_stderr = stderr_of(latent, latent_sq);
  const double data_mse = data / count;
  m.rmse = std::sqrt(data_mse);
  m.psnr_db = psnr_from_mse(data_mse, pipeline.peak);
  m.psnr_stderr = data_mse > 0.0 ? 10.0 / std::numbers::ln10 * stderr_of(data, data_sq) / data_mse
                                 : 0.0;
  m.ssim = ssim_sum / count;
  m.scaled_energy = alpha * alpha * measure_energy(observations, exec);
  return m;
}

std::vector<SweepRow> run_snr_sweep(const ExperimentConfig& config, Exec exec,
                                    std::vector<Image>* previews) {
  config.validate(ExperimentKind::snr_sweep);
  const Pipeline p = build_pipeline(config);
  const TestSet test = make_test_set(p.train_source, p.codec, config.trials, config.seed, exec);

  if (previews) previews->push_back(p.train_source.as_image(test.x.front()));

  std::vector<SweepRow> rows;
  for (double snr : config.snr_db) {
    const double sigma2 = snr_db_to_sigma2(snr, p.gamma);
    const auto ys = observe(test, sigma2);
    const ChannelSpec spec{sigma2, p.gamma, received_energy(config, ys, sigma2, p.gamma, exec)};
    const ReceiverParams params = receiver_params(spec, receiver_options(config).phi_policy);
    if (previews) {
      Vec z_hat = ys.front();
      if (p.predictor) {
        Rng rng = Rng::stream(config.seed, Stream::reverse, 0);
        z_hat = denoise_with_params(ys.front(), params.t_star, params.alpha, *p.predictor,
                                    receiver_options(config), rng);
      }
      previews->push_back(p.train_source.as_image(p.codec.decode(z_hat)));
    }
    rows.push_back(SweepRow{snr, sigma2, params.t_star.value(), params.alpha,
                            evaluate(p, p.train_source, test, ys, params.t_star, params.alpha, exec),
                            config.trials, config.seed});
  }
  return rows;
}

std::vector<SensitivityRow> run_sensitivity(const ExperimentConfig& config, Exec exec) {
  config.validate(ExperimentKind::sensitivity);
  const Pipeline p = build_pipeline(config);
  const TestSet test = make_test_set(p.train_source, p.codec, config.trials, config.seed, exec);

  std::vector<SensitivityRow> rows;
  for (double snr : config.snr_db) {
    const double sigma2 = snr_db_to_sigma2(snr, p.gamma);
    const auto ys = observe(test, sigma2);
    const ChannelSpec spec{sigma2, p.gamma, received_energy(config, ys, sigma2, p.gamma, exec)};
    const ReceiverParams params = receiver_params(spec, receiver_options(config).phi_policy);

    for (const char* param : {"t", "alpha"}) {
      const bool perturb_t = param[0] == 't';
      for (double pert : config.perturbations) {
        SensitivityRow row{snr, param, pert, 0.0, 0.0, std::nullopt, "ok", config.trials, config.seed};
        if (perturb_t) {
          row.t = params.t_star.value() * (1.0 + pert);
          if (!(row.t > 0.0 && row.t < 1.0)) {
            row.status = "skipped: perturbed t outside (0, 1)";
            rows.push_back(std::move(row));
            continue;
          }
          row.alpha = scaling_factor(spec, Timestep(row.t));
        } else {
          row.t = params.t_star.value();
          row.alpha = params.alpha * (1.0 + pert);
        }
        row.metrics = evaluate(p, p.train_source, test, ys, Timestep(row.t), row.alpha, exec);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<OodRow> run_ood_sweep(const ExperimentConfig& config, Exec exec) {
  config.validate(ExperimentKind::ood_sweep);
  const Pipeline p = build_pipeline(config);
  const DataSource ood_source =
      DataSource::make(*config.test_source, p.train_source.data_dim(), p.train_source.width(),
                       config.latent_dim);
  if (ood_source.data_dim() != p.train_source.data_dim()) {
    throw Error(Errc::config, "test_source: image size differs from the training source");
  }
  const TestSet in_test = make_test_set(p.train_source, p.codec, config.trials, config.seed, exec);
  const TestSet ood_test = make_test_set(ood_source, p.codec, config.trials, config.seed, exec);

  std::vector<OodRow> rows;
  for (double snr : config.snr_db) {
    const double sigma2 = snr_db_to_sigma2(snr, p.gamma);
    for (const char* split : {"in", "ood"}) {
      const bool in = split[0] == 'i';
      const DataSource& src = in ? p.train_source : ood_source;
      const TestSet& test = in ? in_test : ood_test;
      const auto ys = observe(test, sigma2);
      const double y_energy = measure_energy(ys, exec);

      for (const char* mode : {"measured", "unit"}) {
        OodRow row{snr, split, mode, sigma2, 0.0, 0.0, 0.0, 0.0, std::nullopt, "ok",
                   config.trials, config.seed};
        if (mode[0] == 'm') {
          // The test batch's own signal energy drives both formulas.
          row.gamma = y_energy - sigma2;
          if (!(row.gamma > 0.0)) {
            row.status = "skipped: measured energy below the noise floor";
            rows.push_back(std::move(row));
            continue;
          }
          const ReceiverParams rp = receiver_params(ChannelSpec{sigma2, row.gamma, y_energy});
          row.t_star = rp.t_star.value();
          row.alpha = rp.alpha;
        } else {
          // Unit-energy shortcut: t from sigma2 alone, alpha normalizes the measured energy to
          // that of a unit-energy x_t.
          row.gamma = 1.0;
          row.t_star = timestep_simplified(sigma2).value();
          const double keep = 1.0 - row.t_star;
          row.alpha = std::sqrt((keep * keep + row.t_star) / y_energy);
        }
        const double keep = 1.0 - row.t_star;
        row.target_energy = keep * keep * row.gamma + row.t_star;
        row.metrics = evaluate(p, src, test, ys, Timestep(row.t_star), row.alpha, exec);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

CodecSummary train_codec(const ExperimentConfig& config) {
  config.validate(ExperimentKind::train_codec);
  const DataSource source = DataSource::make(config.source, config.data_dim, config.image_width, config.latent_dim);
  const std::vector<Vec> corpus = source.training_corpus(config.train_samples, config.seed);
  CodecSummary out{LinearCodec::fit(corpus, config.latent_dim), 0.0};
  double total = 0.0;
  for (const Vec& x : corpus) total += mse(out.codec.decode(out.codec.encode(x)), x);
  out.train_reconstruction_mse = total / static_cast<double>(corpus.size());
  return out;
}

DenoiserSummary train_denoiser(const ExperimentConfig& config, Exec exec) {
  config.validate(ExperimentKind::train_denoiser);
  const DataSource source = DataSource::make(config.source, config.data_dim, config.image_width, config.latent_dim);
  const std::vector<Vec> corpus = source.training_corpus(config.train_samples, config.seed);
  LinearCodec codec = load_or_fit_codec(config, source, corpus);
  const std::vector<Vec> latents = encode_all(codec, corpus);

  MlpShape shape = config.mlp;
  shape.dim = codec.latent_dim();
  Rng rng = Rng::stream(config.seed, Stream::denoiser_init, 0);
  TrainResult result = mlp_train(latents, shape, config.train, rng, exec);
  return DenoiserSummary{std::move(codec), std::move(result)};
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  CsvWriter w({"snr_db", "sigma2", "t_star", "alpha", "latent_mse", "latent_mse_baseline", "rmse",
               "psnr_db", "ssim", "trials", "seed"});
  for (const auto& r : rows) {
    w.field(r.snr_db).field(r.sigma2).field(r.t_star).field(r.alpha);
    w.field(r.metrics.latent_mse).field(r.metrics.latent_mse_baseline).field(r.metrics.rmse);
    w.field(r.metrics.psnr_db).field(r.metrics.ssim);
    w.field(static_cast<std::uint64_t>(r.trials)).field(r.seed);
    w.end_row();
  }
  return w.str();
}

std::string to_csv(const std::vector<SensitivityRow>& rows) {
  CsvWriter w({"snr_db", "perturbed_param", "perturbation_pct", "t", "alpha", "latent_mse",
               "latent_mse_baseline", "rmse", "psnr_db", "ssim", "trials", "seed", "status"});
  for (const auto& r : rows) {
    w.field(r.snr_db).field(r.perturbed_param).field(r.perturbation * 100.0);
    w.field(r.t).field(r.alpha);
    if (r.metrics) {
      w.field(r.metrics->latent_mse).field(r.metrics->latent_mse_baseline).field(r.metrics->rmse);
      w.field(r.metrics->psnr_db).field(r.metrics->ssim);
    } else {
      for (int i = 0; i < 5; ++i) w.field(std::string_view(""));
    }
    w.field(static_cast<std::uint64_t>(r.trials)).field(r.seed).field(r.status);
    w.end_row();
  }
  return w.str();
}

std::string to_csv(const std::vector<OodRow>& rows) {
  CsvWriter w({"snr_db", "split", "gamma_mode", "sigma2", "gamma", "t_star", "alpha",
               "scaled_energy", "target_energy", "latent_mse", "latent_mse_baseline", "rmse",
               "psnr_db", "ssim", "trials", "seed", "status"});
  for (const auto& r : rows) {
    w.field(r.snr_db).field(r.split).field(r.gamma_mode).field(r.sigma2).field(r.gamma);
    w.field(r.t_star).field(r.alpha);
    if (r.metrics) {
      w.field(r.metrics->scaled_energy).field(r.target_energy);
      w.field(r.metrics->latent_mse).field(r.metrics->latent_mse_baseline).field(r.metrics->rmse);
      w.field(r.metrics->psnr_db).field(r.metrics->ssim);
    } else {
      for (int i = 0; i < 7; ++i) w.field(std::string_view(""));
    }
    w.field(static_cast<std::uint64_t>(r.trials)).field(r.seed).field(r.status);
    w.end_row();
  }
  return w.str();
}

std::string loss_trace_csv(const std::vector<double>& trace, std::size_t log_every,
                           std::size_t total_steps) {
  CsvWriter w({"step", "mean_loss"});
  for (std::size_t i = 0; i < trace.size(); ++i) {
    w.field(static_cast<std::uint64_t>(std::min((i + 1) * log_every, total_steps))).field(trace[i]);
    w.end_row();
  }
  return w.str();
}

}  // namespace snrdiff
