// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
#include "snrdiff/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "snrdiff/adapt.hpp"
#include "snrdiff/channel.hpp"
#include "snrdiff/harness/csv.hpp"
#include "snrdiff/mlp.hpp"
#include "snrdiff/oracle.hpp"
#include "snrdiff/receiver.hpp"
#include "snrdiff/schedule.hpp"

namespace snrdiff {
namespace {

constexpr std::size_t kGrid = 1000;
constexpr std::size_t kMonteCarlo = 200000;

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return g;
}

double bisect_timestep(double phi) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double f = (1.0 - mid) * (1.0 - mid) - phi * mid;
    (f > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

class Suite {
 public:
  void at_most(std::string name, double tolerance, double value) {
    out_.push_back({std::move(name), tolerance, value, value <= tolerance});
  }
  void below(std::string name, double bound, double value) {
    out_.push_back({std::move(name), bound, value, value < bound});
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::vector<CheckResult> out_;
};

void schedule_roots(Suite& s) {
  const auto phis = log_grid(1e-6, 1e6, kGrid);
  double residual = 0.0;
  double bisection = 0.0;
  std::size_t non_decreasing = 0;
  double prev = 2.0;
  for (double phi : phis) {
    const double t = timestep_for_phi(phi).value();
    residual = std::max(residual, std::abs((1.0 - t) * (1.0 - t) - phi * t));
    bisection = std::max(bisection, std::abs(t - bisect_timestep(phi)));
    if (!(t < prev)) ++non_decreasing;
    prev = t;
  }
  s.at_most("timestep_root_residual", 1e-12, residual);
  s.at_most("timestep_bisection_agreement", 1e-12, bisection);
  s.at_most("timestep_strictly_decreasing_violations", 0.0, static_cast<double>(non_decreasing));
  s.at_most("timestep_low_snr_limit_gap", 1e-4, 1.0 - timestep_for_phi(1e-9).value());
  s.at_most("timestep_high_snr_limit", 1e-6, timestep_for_phi(1e12).value());

  double simplified = 0.0;
  for (double sigma2 : log_grid(1e-6, 1e6, kGrid)) {
    simplified = std::max(simplified, std::abs(timestep_simplified(sigma2).value() -
                                               timestep_for_phi(1.0 / sigma2).value()));
  }
  s.at_most("timestep_simplified_equivalence", 1e-12, simplified);
}

void scaling_identities(Suite& s, Rng& rng, double sign) {
  double identity = 0.0;
  double matched = 0.0;
  double matched_sq = 0.0;
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double gamma = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
    const double sigma2 = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
    const ChannelSpec spec = ChannelSpec::consistent(gamma, sigma2);
    const Timestep t(rng.uniform());
    const double a = sign * scaling_factor(spec, t);
    const double keep = 1.0 - t.value();
    identity = std::max(identity,
                        std::abs(a * a * (gamma + sigma2) - (keep * keep * gamma + t.value())));

    const Timestep ts = timestep_for_phi(compute_phi(spec));
    const double am = sign * scaling_factor(spec, ts);
    matched = std::max(matched, std::abs(am - (1.0 - ts.value())));
    matched_sq = std::max(matched_sq, std::abs(am * am - ts.value() / sigma2));
  }
  s.at_most("scaling_energy_identity", 1e-12, identity);
  s.at_most("matched_alpha_equals_one_minus_t", 1e-9, matched);
  s.at_most("matched_alpha_squared_equals_t_over_sigma2", 1e-9, matched_sq);
}

// Unit-energy Gaussian latents through the channel, scaled by alpha.
void moment_alignment(Suite& s, std::uint64_t seed, double sign) {
  constexpr std::size_t d = 16;
  constexpr std::size_t n = kMonteCarlo;
  double worst_moment = 0.0;
  double worst_coeff = 0.0;
  for (double sigma2 : {0.1, 1.0, 10.0}) {
    Rng rng = Rng::stream(seed, Stream::verify, static_cast<std::uint64_t>(sigma2 * 1000));
    const ReceiverParams p = receiver_params(ChannelSpec::consistent(1.0, sigma2));
    const double alpha = sign * p.alpha;
    const double t = p.t_star.value();
    double second = 0.0;
    double cross = 0.0;
    double signal = 0.0;
    const double sd = std::sqrt(sigma2);
    for (std::size_t i = 0; i < n * d; ++i) {
      const double z = rng.normal();
      const double ay = alpha * (z + sd * rng.normal());
      second += ay * ay;
      cross += ay * z;
      signal += z * z;
    }
    const double target = (1.0 - t) * (1.0 - t) + t;
    worst_moment = std::max(worst_moment, std::abs(second / (n * d) / target - 1.0));
    worst_coeff = std::max(worst_coeff, std::abs((cross / signal) / (1.0 - t) - 1.0));
  }
  s.at_most("moment_alignment_second_moment_rel", 0.01, worst_moment);
  s.at_most("moment_alignment_signal_coefficient_rel", 0.01, worst_coeff);
}

void schedule_steps(Suite& s, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, Stream::verify, 100);
  double telescoping = 0.0;
  for (std::size_t i = 0; i < kGrid; ++i) {
    const Vec x0 = rng.normal_vec(8);
    const Timestep t(0.01 + 0.98 * rng.uniform());
    const ForwardSample f = forward_corrupt(x0, t, rng);
    const Vec back = reverse_step(f.x_t, ReverseStepPlan{t, t.value(), false}, f.eps, rng);
    for (std::size_t k = 0; k < x0.size(); ++k) {
      telescoping = std::max(telescoping, std::abs(back[k] - x0[k]));
    }
  }
  s.at_most("telescoping_single_step_max_abs", 1e-9, telescoping);

  // Scalar N(0,1) data: x_t and one stochastic step both keep the forward marginal.
  const Timestep t(0.5);
  const double dt = 0.25;
  double fwd = 0.0;
  double rev = 0.0;
  for (std::size_t i = 0; i < kMonteCarlo; ++i) {
    const Vec x0{rng.normal()};
    const ForwardSample f = forward_corrupt(x0, t, rng);
    fwd += f.x_t[0] * f.x_t[0];
    const Vec xs = reverse_step(f.x_t, ReverseStepPlan{t, dt, true}, f.eps, rng);
    rev += xs[0] * xs[0];
  }
  const double n = static_cast<double>(kMonteCarlo);
  s.at_most("forward_marginal_variance_rel", 0.02, std::abs(fwd / n / 0.75 - 1.0));
  s.at_most("stochastic_step_variance_rel", 0.02, std::abs(rev / n / 0.8125 - 1.0));
}

void channel_checks(Suite& s, std::uint64_t seed) {
  constexpr std::size_t d = 16;
  Rng rng = Rng::stream(seed, Stream::verify, 200);
  const double sigma2 = 0.5;
  std::vector<Vec> ys;
  std::vector<double> cov(d * d, 0.0);
  ys.reserve(kMonteCarlo);
  for (std::size_t i = 0; i < kMonteCarlo; ++i) {
    const Vec z = rng.normal_vec(d);
    const Vec w = rng.normal_vec(d);
    ys.push_back(transmit_with_noise(z, sigma2, w).y);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 1; b < d; ++b) cov[a * d + b] += w[a] * w[b];
    }
  }
  s.at_most("channel_energy_additivity_rel", 0.01,
            std::abs(measure_energy(ys) / (1.0 + sigma2) - 1.0));
  double off = 0.0;
  for (double c : cov) off = std::max(off, std::abs(c) / static_cast<double>(kMonteCarlo));
  s.at_most("channel_noise_whiteness_max_offdiag", 0.02, off);

  double db = 0.0;
  for (double snr = -30.0; snr <= 30.0; snr += 0.5) {
    for (double gamma : {0.3, 1.0, 4.0}) {
      db = std::max(db, std::abs(sigma2_to_snr_db(snr_db_to_sigma2(snr, gamma), gamma) - snr));
    }
  }
  s.at_most("snr_db_round_trip", 1e-12, db);
}

void denoise_checks(Suite& s, std::uint64_t seed) {
  constexpr std::size_t d = 16;
  constexpr std::size_t trials = 100000;
  const GaussianOracle oracle(GaussianPrior{Vec(d, 0.0), Vec(d, 1.0)});
  const ReceiverParams p = receiver_params(ChannelSpec::consistent(1.0, 1.0));
  std::vector<Vec> z(trials);
  std::vector<Vec> y(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = Rng::stream(seed, Stream::verify, 1000 + i);
    z[i] = rng.normal_vec(d);
    y[i] = transmit(z[i], 1.0, rng).y;
  }
  auto mse_of = [&](const std::vector<Vec>& est) {
    double acc = 0.0;
    for (std::size_t i = 0; i < trials; ++i) acc += squared_distance(est[i], z[i]);
    return acc / static_cast<double>(trials * d);
  };
  const auto single = denoise_batch(y, p.t_star, p.alpha, oracle, ReceiverOptions{}, seed,
                                    Exec::parallel);
  const double single_mse = mse_of(single);
  s.at_most("mmse_single_step_rel", 0.02, std::abs(single_mse / 0.5 - 1.0));
  s.below("mmse_below_no_denoise", mse_of(y), single_mse);

  ReceiverOptions ten;
  ten.num_steps = 10;
  const double chain_mse =
      mse_of(denoise_batch(y, p.t_star, p.alpha, oracle, ten, seed, Exec::parallel));
  s.at_most("chain_vs_single_step_mse_rel", 0.15, std::abs(chain_mse / single_mse - 1.0));

  // A one-step chain is the single-step reconstruction.
  Rng rng = Rng::stream(seed, Stream::verify, 300);
  double one_step = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const Vec x = scaled(y[i], p.alpha);
    const Vec a = reverse_chain(x, p.t_star, 1, oracle, false, rng);
    const Vec b = single_step_denoise(x, p.t_star, oracle.predict(x, p.t_star));
    for (std::size_t k = 0; k < d; ++k) one_step = std::max(one_step, std::abs(a[k] - b[k]));
  }
  s.at_most("one_step_chain_equals_single_step", 0.0, one_step);
}

double quadrature_posterior_mean(const GmmPrior& prior, double x_t, double t) {
  constexpr std::size_t points = 1000000;
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& c : prior.components) {
    const double sd = std::sqrt(c.var[0]);
    lo = std::min(lo, c.mean[0] - 14.0 * sd);
    hi = std::max(hi, c.mean[0] + 14.0 * sd);
  }
  const double h = (hi - lo) / static_cast<double>(points);
  auto log_density = [&](double x0) {
    double mix = 0.0;
    for (const auto& c : prior.components) {
      const double u = x0 - c.mean[0];
      mix += c.weight * std::exp(-0.5 * u * u / c.var[0]) / std::sqrt(c.var[0]);
    }
    const double r = x_t - (1.0 - t) * x0;
    return std::log(mix) - 0.5 * r * r / t;
  };
  double peak = -INFINITY;
  for (std::size_t i = 0; i < points; i += 1000) {
    peak = std::max(peak, log_density(lo + (static_cast<double>(i) + 0.5) * h));
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x0 = lo + (static_cast<double>(i) + 0.5) * h;
    const double w = std::exp(log_density(x0) - peak);
    num += w * x0;
    den += w;
  }
  return num / den;
}

void gmm_quadrature(Suite& s) {
  const std::vector<GmmPrior> priors{
      GmmPrior{{{0.5, {-2.0}, {0.25}}, {0.5, {2.0}, {0.25}}}},
      GmmPrior{{{0.3, {-1.0}, {0.5}}, {0.7, {3.0}, {1.5}}}},
      GmmPrior{{{0.9, {0.0}, {1.0}}, {0.1, {5.0}, {0.1}}}},
  };
  double worst = 0.0;
  for (const auto& prior : priors) {
    for (double t : {0.1, 0.5, 0.9}) {
      for (double x : {-3.0, -0.7, 0.0, 1.3, 4.0}) {
        const Vec xt{x};
        const double exact = gmm_posterior_mean(prior, xt, Timestep(t))[0];
        worst = std::max(worst, std::abs(exact - quadrature_posterior_mean(prior, x, t)));
      }
    }
  }
  s.at_most("gmm_posterior_vs_quadrature_max_abs", 1e-6, worst);
}

void gradient_check(Suite& s, std::uint64_t seed) {
  constexpr double h = 1e-5;
  constexpr double floor = 1e-6;
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    Rng rng = Rng::stream(seed, Stream::verify, 400 + k);
    MlpPredictor model = MlpPredictor::initialize(MlpShape{3, 5, 2}, rng);
    std::vector<Vec> data;
    for (int i = 0; i < 16; ++i) data.push_back(rng.normal_vec(3));
    const TrainingBatch batch = sample_batch(data, 8, 1e-3, rng);
    const Eigen::VectorXd analytic = mlp_gradient(model, batch).flatten();
    const Eigen::VectorXd theta = model.flatten();
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Eigen::VectorXd p = theta;
      p[i] += h;
      model.unflatten(p);
      const double up = mlp_loss(model, batch);
      p[i] = theta[i] - h;
      model.unflatten(p);
      const double down = mlp_loss(model, batch);
      const double numeric = (up - down) / (2.0 * h);
      const double scale = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
      worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
    }
    model.unflatten(theta);
  }
  s.at_most("mlp_gradient_relative_error", 1e-4, worst);
}

}  // namespace

std::vector<CheckResult> run_verify_theory(const ExperimentConfig& config) {
  const double sign = config.inject_alpha_sign_bug ? -1.0 : 1.0;
  Suite s;
  Rng rng = Rng::stream(config.seed, Stream::verify, 0);
  schedule_roots(s);
  scaling_identities(s, rng, sign);
  moment_alignment(s, config.seed, sign);
  schedule_steps(s, config.seed);
  channel_checks(s, config.seed);
  denoise_checks(s, config.seed);
  gmm_quadrature(s);
  gradient_check(s, config.seed);
  return s.take();
}

std::string to_csv(const std::vector<CheckResult>& checks) {
  CsvWriter w({"check", "tolerance", "value", "verdict"});
  for (const auto& c : checks) {
    w.field(std::string_view(c.name)).field(c.tolerance).field(c.value);
    w.field(std::string_view(c.pass ? "pass" : "fail"));
    w.end_row();
  }
  return w.str();
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

}  // namespace snrdiff
