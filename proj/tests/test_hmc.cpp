#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>

#include "bayesxg/bayes/diagnostics.hpp"
#include "bayesxg/bayes/fit.hpp"
#include "bayesxg/errors.hpp"
#include "bayesxg/glm.hpp"
#include "bayesxg/rng.hpp"
#include "bayesxg/synth.hpp"

using namespace bayesxg;
using bayes::FunctionTarget;
using bayes::PosteriorSamples;
using bayes::SamplerConfig;

namespace {

FunctionTarget std_normal_target(int dim) {
  return FunctionTarget(dim, [](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    grad = -z;
    return -0.5 * z.squaredNorm();
  });
}

}  // namespace

TEST_CASE("20-dimensional standard normal calibration") {
  SamplerConfig config;
  config.chains = 4;
  config.draws = 1500;
  config.warmup = 250;
  config.target_accept = 0.95;
  config.seed = 314;
  const auto target = std_normal_target(20);
  const auto samples = bayes::run_hmc(target, config);

  REQUIRE(samples.n_chains() == 4);
  REQUIRE(samples.retained_per_chain() == 1250);

  for (int j = 0; j < 20; ++j) {
    const Eigen::MatrixXd all = samples.stacked();
    const double mean = all.col(j).mean();
    const double sd = std::sqrt((all.col(j).array() - mean).square().sum() /
                                (all.rows() - 1.0));
    const double effective = bayes::ess(samples, j);
    REQUIRE(effective > 100.0);
    const double mcse = sd / std::sqrt(effective);
    CAPTURE(j);
    CHECK(std::fabs(mean) < 3.0 * mcse);
    CHECK(bayes::rhat(samples, j) < 1.01);
    // Marginal variance should be near one as well.
    CHECK(sd == doctest::Approx(1.0).epsilon(0.1));
  }

  CHECK(samples.mean_accept() > 0.90);
  CHECK(samples.mean_accept() < 0.99);
  CHECK(samples.total_divergences() == 0);
  CHECK_FALSE(samples.divergence_flag);
}

TEST_CASE("intercept-only Bayesian logistic matches quadrature") {
  // 30 goals out of 100 with a normal(0, 5) prior on the intercept.
  const int n = 100, goals = 30;
  FunctionTarget target(1, [&](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    const double beta = z(0);
    const double p = glm::inverse_logit(beta);
    grad.resize(1);
    grad(0) = goals - n * p + dists::grad_log_pdf(dists::Normal{0.0, 5.0}, beta);
    const double soft = beta > 0.0 ? beta + std::log1p(std::exp(-beta))
                                   : std::log1p(std::exp(beta));
    return goals * beta - n * soft + dists::log_pdf(dists::Normal{0.0, 5.0}, beta);
  });

  // Fine-grid quadrature oracle for the posterior mean.
  double mass = 0.0, moment = 0.0;
  const int grid = 400001;
  Eigen::VectorXd dummy(1);
  for (int i = 0; i < grid; ++i) {
    const double beta = -6.0 + 12.0 * i / (grid - 1.0);
    Eigen::VectorXd z(1);
    z << beta;
    const double w = std::exp(target.log_density(z, dummy));
    mass += w;
    moment += beta * w;
  }
  const double quadrature_mean = moment / mass;  // close to logit(0.3)

  SamplerConfig config;
  config.seed = 99;
  const auto samples = bayes::run_hmc(target, config);
  const double hmc_mean = samples.stacked().col(0).mean();
  CHECK(std::fabs(hmc_mean - quadrature_mean) < 0.02);
}

TEST_CASE("acceptance statistic tracks the target") {
  SamplerConfig config;
  config.seed = 2718;
  config.target_accept = 0.80;
  const auto samples = bayes::run_hmc(std_normal_target(5), config);
  CHECK(samples.mean_accept() > 0.70);
  CHECK(samples.mean_accept() < 0.92);
}

TEST_CASE("bit-identical reruns and scheduler independence") {
  synth::TruthConfig data_config;
  data_config.predictors = features::PredictorSet::baseline;
  data_config.grouping = {features::Grouping::position, {}};
  data_config.group_offsets = {0.3, 0.1, -0.1, -0.4};
  data_config.n = 400;
  data_config.seed = 17;
  const auto data = synth::generate_shots(data_config);
  const auto spec = bayes::make_model_spec(data.design);

  SamplerConfig config;
  config.chains = 4;
  config.draws = 400;
  config.warmup = 150;
  config.seed = 123456;
  const auto a = bayes::fit(spec, data.design, data.outcomes, config);
  const auto b = bayes::fit(spec, data.design, data.outcomes, config);
  REQUIRE(a.n_chains() == b.n_chains());
  for (int c = 0; c < a.n_chains(); ++c) {
    CHECK(a.chains[c] == b.chains[c]);
  }

  SamplerConfig serial = config;
  serial.parallel_chains = false;
  const auto c = bayes::fit(spec, data.design, data.outcomes, serial);
  for (int k = 0; k < a.n_chains(); ++k) {
    CHECK(a.chains[k] == c.chains[k]);
  }

  SamplerConfig reseeded = config;
  reseeded.seed = config.seed + 1;
  const auto d = bayes::fit(spec, data.design, data.outcomes, reseeded);
  CHECK(a.chains[0] != d.chains[0]);
}

TEST_CASE("halved step size accepts a superset of proposals") {
  // Quadratic target; energy errors shrink with the step, so any proposal
  // accepted at eps passes at eps/2 on the same uniform draw.
  const auto target = std_normal_target(4);
  Rng rng(505);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd q(4), p(4);
    for (int j = 0; j < 4; ++j) {
      q(j) = rng.uniform(-2.0, 2.0);
      p(j) = rng.normal();
    }
    const double full = bayes::leapfrog_energy_error(target, q, p, 0.25, 16);
    const double half = bayes::leapfrog_energy_error(target, q, p, 0.125, 32);
    const double accept_full = std::min(1.0, std::exp(-full));
    const double accept_half = std::min(1.0, std::exp(-half));
    CHECK(accept_half >= accept_full - 1e-12);
    ++compared;
  }
  CHECK(compared == 200);
}

TEST_CASE("divergences are counted and flagged") {
  // Hard density walls: trajectories leave the support and the energy
  // error blows up.
  FunctionTarget box(2, [](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    grad.setZero(2);
    if (z.lpNorm<Eigen::Infinity>() > 10.0) {
      return -std::numeric_limits<double>::infinity();
    }
    return 0.0;
  });
  SamplerConfig config;
  config.chains = 2;
  config.draws = 300;
  config.warmup = 100;
  config.seed = 41;
  const auto samples = bayes::run_hmc(box, config);
  CHECK(samples.total_divergences() > 0);
  CHECK(samples.divergence_flag);
}

TEST_CASE("non-finite gradients abort") {
  FunctionTarget bad(2, [](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    grad.setConstant(2, std::numeric_limits<double>::quiet_NaN());
    return -0.5 * z.squaredNorm();
  });
  SamplerConfig config;
  config.chains = 1;
  config.draws = 10;
  config.warmup = 5;
  CHECK_THROWS_AS(bayes::run_hmc(bad, config), NonFiniteGradientError);
}

TEST_CASE("grouped posterior means match a 3-D quadrature oracle") {
  // One-level hierarchy with no slope predictors: parameters are the shared
  // intercept, one offset u, and the log group scale s. Small enough to
  // integrate on a grid — a direct check that the sampler targets the
  // declared posterior including the group machinery.
  const int n = 40, goals = 14;

  // Independent oracle: trapezoid moments in (eta, ut, s) coordinates with
  // eta = beta0 + u and u = exp(s) * ut, which keeps the integrand smooth
  // at small group scales. Jacobian of (beta0, u) -> (eta, ut) is exp(s).
  auto softplus = [](double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  };
  auto log_phi = [](double z) { return -0.5 * z * z - 0.918938533204672742; };
  auto log_cdf = [](double t) {
    return std::log(0.5 * std::erfc(-t * M_SQRT1_2));
  };
  const int ge = 180, gu = 270, gs = 360;
  const double elo = -4.0, ehi = 2.0;
  const double ulo = -6.0, uhi = 8.0;
  const double slo = -14.0, shi = 4.0;
  std::vector<double> likelihood(static_cast<std::size_t>(ge) + 1);
  for (int a = 0; a <= ge; ++a) {
    const double eta = elo + (ehi - elo) * a / ge;
    likelihood[static_cast<std::size_t>(a)] = goals * eta - n * softplus(eta);
  }
  double mass = 0.0, mean_b0 = 0.0, mean_u = 0.0, mean_s = 0.0;
  for (int c = 0; c <= gs; ++c) {
    const double s = slo + (shi - slo) * c / gs;
    const double sigma = std::exp(s);
    // half-normal(2) hyperprior, log-space change of variable, jacobian.
    const double log_base =
        std::log(2.0) + log_phi(sigma / 2.0) - std::log(2.0) + s + s;
    for (int b = 0; b <= gu; ++b) {
      const double ut = ulo + (uhi - ulo) * b / gu;
      const double u = sigma * ut;
      const double log_ut_prior =
          std::log(2.0) + log_phi(ut) + log_cdf(2.0 * ut) - s;
      for (int a = 0; a <= ge; ++a) {
        const double eta = elo + (ehi - elo) * a / ge;
        const double beta0 = eta - u;
        const double log_b_prior = log_phi(beta0 / 2.0) - std::log(2.0);
        const double w = std::exp(likelihood[static_cast<std::size_t>(a)] +
                                  log_b_prior + log_ut_prior + log_base);
        mass += w;
        mean_b0 += beta0 * w;
        mean_u += u * w;
        mean_s += s * w;
      }
    }
  }
  mean_b0 /= mass;
  mean_u /= mass;
  mean_s /= mass;
  // Grid-converged values (identical from 120x180x240 through 260x390x520).
  CHECK(mean_b0 == doctest::Approx(-1.10373).epsilon(1e-3));
  CHECK(mean_u == doctest::Approx(0.49938).epsilon(1e-3));
  CHECK(mean_s == doctest::Approx(-0.19145).epsilon(1e-2));

  features::DesignMatrix design;
  design.X.resize(n, 0);
  design.grouping = features::Grouping::player;
  design.group_levels = {"Solo"};
  design.group_index = Eigen::VectorXi::Zero(n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  y.head(goals).setOnes();

  bayes::ModelSpec spec;
  spec.predictors = features::PredictorSet::baseline;
  spec.grouping = features::Grouping::player;
  spec.selected_players = {"Solo"};
  spec.intercept_prior = dists::Normal{0.0, 2.0};
  spec.group_alpha = {2.0};
  spec.hyper_scale_gamma = 2.0;

  SamplerConfig config;
  config.draws = 3000;
  config.warmup = 500;
  config.seed = 1717;
  const auto samples = bayes::fit(spec, design, y, config);
  REQUIRE(samples.param_names ==
          std::vector<std::string>{"intercept", "u[Solo]", "log_sigma_group"});
  const Eigen::MatrixXd all = samples.stacked();
  // About 2-3 Monte Carlo standard errors at this effective sample size.
  CHECK(std::fabs(all.col(0).mean() - mean_b0) < 0.07);
  CHECK(std::fabs(all.col(1).mean() - mean_u) < 0.07);
  CHECK(std::fabs(all.col(2).mean() - mean_s) < 0.05);
}

TEST_CASE("draws CSV round trip preserves every draw") {
  SamplerConfig config;
  config.chains = 2;
  config.draws = 150;
  config.warmup = 30;
  config.seed = 77;
  const auto samples = bayes::run_hmc(std_normal_target(3), config);
  const auto path = std::filesystem::temp_directory_path() /
                    ("bayesxg_draws_" + std::to_string(::getpid()) + ".csv");
  bayes::save_draws_csv(samples, path);
  const auto loaded = bayes::load_draws_csv(path);
  std::filesystem::remove(path);
  REQUIRE(loaded.n_chains() == samples.n_chains());
  REQUIRE(loaded.param_names == samples.param_names);
  for (int c = 0; c < samples.n_chains(); ++c) {
    CHECK(loaded.chains[static_cast<std::size_t>(c)] ==
          samples.chains[static_cast<std::size_t>(c)]);
  }
}

TEST_CASE("fixed-path fallback samples the same target") {
  SamplerConfig config;
  config.dynamic = false;
  config.fixed_path_steps = 24;
  config.seed = 11;
  config.draws = 2000;
  config.warmup = 500;
  const auto samples = bayes::run_hmc(std_normal_target(3), config);
  const Eigen::MatrixXd all = samples.stacked();
  for (int j = 0; j < 3; ++j) {
    CHECK(std::fabs(all.col(j).mean()) < 0.1);
    const double sd = std::sqrt((all.col(j).array() - all.col(j).mean())
                                    .square()
                                    .sum() /
                                (all.rows() - 1.0));
    CHECK(sd == doctest::Approx(1.0).epsilon(0.15));
  }
}
