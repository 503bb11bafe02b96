#pragma once

#include <string>
#include <vector>

#include "bayesxg/dists.hpp"
#include "bayesxg/features.hpp"

namespace bayesxg::bayes {

/// One Bayesian logistic model: predictor set, optional varying-intercept
/// grouping, one prior per design column, one skew shape per group level,
/// and a half-normal hyperprior on the group scale.
struct ModelSpec {
  features::PredictorSet predictors = features::PredictorSet::extended;
  features::Grouping grouping = features::Grouping::none;
  std::vector<std::string> selected_players;
  dists::PriorDist intercept_prior = dists::Normal{0.0, 5.0};
  std::vector<dists::PriorDist> coef_priors;  // aligned to design columns
  std::vector<double> group_alpha;            // aligned to group levels
  double hyper_scale_gamma = 5.0;
};

/// Default prior for one design column: skewed where the direction of the
/// effect is predictable, with per-level shapes for the count blocks
/// (0 players in the triangle -> 5, one more player -> one step down, ...).
dists::PriorDist default_coef_prior(const features::Column& column);

std::vector<dists::PriorDist> default_priors(const features::DesignMatrix& design);

/// Group shapes per position level {ST, AM, M, D}.
std::vector<double> default_position_alphas();

/// Group shapes per player level: 2 for names in `good_finishers`, else 0.
/// The trailing "other" pooled level always gets 0.
std::vector<double> player_alphas(const std::vector<std::string>& levels,
                                  const std::vector<std::string>& good_finishers);

/// Assemble a ModelSpec for one of the three stock hierarchical models
/// (baseline+position, extended+position, extended+player) or their
/// single-level counterparts.
ModelSpec make_model_spec(const features::DesignMatrix& design,
                          const std::vector<std::string>& selected_players = {},
                          const std::vector<std::string>& good_finishers = {});

/// The six prior configurations exercised by the sensitivity analysis.
struct PriorCase {
  std::string name;
  dists::PriorDist intercept_prior;
  std::vector<dists::PriorDist> coef_priors;
};

std::vector<dists::PriorDist> uniform_priors(const features::DesignMatrix& design,
                                             double a, double b);
std::vector<dists::PriorDist> normal_priors(const features::DesignMatrix& design,
                                            double mu, double sigma);
/// Narrow scales with deliberately reversed skews.
std::vector<dists::PriorDist> ill_suited_priors(const features::DesignMatrix& design);

std::vector<PriorCase> sensitivity_prior_cases(const features::DesignMatrix& design);

}  // namespace bayesxg::bayes
