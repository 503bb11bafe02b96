#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bayesxg/synth.hpp"

using namespace bayesxg;
using features::Grouping;
using features::PredictorSet;

TEST_CASE("zero coefficients give a symmetric goal rate") {
  synth::TruthConfig config;
  config.predictors = PredictorSet::baseline;
  config.intercept = 0.0;
  config.n = 20000;
  config.seed = 101;
  const auto data = synth::generate_shots(config);
  const double rate = data.outcomes.mean();
  CHECK(std::fabs(rate - 0.5) < 3.0 * std::sqrt(0.25 / config.n));
  CHECK((data.true_probability.array() == 0.5).all());
}

TEST_CASE("intercept minus two gives the inverse-logit rate") {
  synth::TruthConfig config;
  config.predictors = PredictorSet::baseline;
  config.intercept = -2.0;
  config.n = 50000;
  config.seed = 55;
  const auto data = synth::generate_shots(config);
  const double expected = 1.0 / (1.0 + std::exp(2.0));  // 0.119202...
  const double se = std::sqrt(expected * (1.0 - expected) / config.n);
  CHECK(std::fabs(data.outcomes.mean() - expected) < 3.0 * se);
}

TEST_CASE("group offsets separate empirical rates") {
  synth::TruthConfig config;
  config.predictors = PredictorSet::baseline;
  config.grouping = {Grouping::player, {"High", "Low"}};
  config.intercept = -1.0;
  config.group_offsets = {1.0, -1.0, 0.0};
  config.n = 20000;
  config.seed = 77;
  const auto data = synth::generate_shots(config);
  double sums[3] = {0, 0, 0};
  long counts[3] = {0, 0, 0};
  for (Eigen::Index i = 0; i < data.outcomes.size(); ++i) {
    const int g = data.design.group_index(i);
    sums[g] += data.outcomes(i);
    ++counts[g];
  }
  REQUIRE(counts[0] > 1000);
  REQUIRE(counts[1] > 1000);
  CHECK(sums[0] / counts[0] > sums[2] / counts[2]);
  CHECK(sums[1] / counts[1] < sums[2] / counts[2]);
}

TEST_CASE("deterministic for a fixed seed") {
  synth::TruthConfig config;
  config.predictors = PredictorSet::extended;
  config.n = 1000;
  config.seed = 9;
  const auto a = synth::generate_shots(config);
  const auto b = synth::generate_shots(config);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(a.outcomes == b.outcomes);
  CHECK(a.design.X == b.design.X);

  config.seed = 10;
  const auto c = synth::generate_shots(config);
  CHECK(a.outcomes != c.outcomes);
  // Same marginal behavior under a different seed.
  CHECK(std::fabs(a.outcomes.mean() - c.outcomes.mean()) < 0.1);
}

TEST_CASE("statsbomb reference column carries the true probability") {
  synth::TruthConfig config;
  config.predictors = PredictorSet::baseline;
  config.betas = Eigen::Vector3d{-0.8, 0.4, 0.1};
  config.n = 500;
  config.seed = 21;
  const auto data = synth::generate_shots(config);
  for (std::size_t i = 0; i < data.rows.size(); i += 29) {
    CHECK(data.rows[i].statsbomb_xg ==
          doctest::Approx(data.true_probability(static_cast<Eigen::Index>(i))));
  }
}
