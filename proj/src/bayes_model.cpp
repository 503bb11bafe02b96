#include "bayesxg/bayes/model.hpp"

#include <algorithm>

namespace bayesxg::bayes {

using dists::Normal;
using dists::PriorDist;
using dists::SkewNormal;
using dists::Uniform;
using features::Column;
using features::Predictor;

PriorDist default_coef_prior(const Column& column) {
  switch (column.source) {
    case Predictor::distance:
      return SkewNormal{-1.0, 5.0, -1.0};
    case Predictor::angle:
      return SkewNormal{1.0, 5.0, 1.0};
    case Predictor::interaction:
      return Normal{0.0, 5.0};
    case Predictor::gk_distance:
      return Normal{0.0, 5.0};
    case Predictor::players_in_triangle:
      // 0 players -> 5, stepping down one per extra player to -5.
      return SkewNormal{-1.0, 5.0, 5.0 - static_cast<double>(column.level)};
    case Predictor::opponents_in_radius:
      // 0 opponents -> 1, down to -2.
      return SkewNormal{-1.0, 5.0, 1.0 - static_cast<double>(column.level)};
    case Predictor::body_part:
      return Normal{0.0, 5.0};
    case Predictor::technique:
      return Normal{0.0, 5.0};
    case Predictor::first_time:
      return Normal{0.0, 5.0};
    case Predictor::gk_in_triangle:
      return SkewNormal{0.0, 5.0, -2.0};
    case Predictor::one_on_one:
      return SkewNormal{0.0, 5.0, 2.0};
    case Predictor::open_goal:
      return SkewNormal{0.0, 5.0, 4.0};
    case Predictor::under_pressure:
      return SkewNormal{0.0, 5.0, -2.0};
  }
  return Normal{0.0, 5.0};
}

std::vector<PriorDist> default_priors(const features::DesignMatrix& design) {
  std::vector<PriorDist> priors;
  priors.reserve(design.columns.size());
  for (const auto& c : design.columns) priors.push_back(default_coef_prior(c));
  return priors;
}

std::vector<double> default_position_alphas() { return {2.0, 1.0, 0.0, -2.0}; }

std::vector<double> player_alphas(const std::vector<std::string>& levels,
                                  const std::vector<std::string>& good_finishers) {
  std::vector<double> alphas;
  alphas.reserve(levels.size());
  for (const auto& level : levels) {
    const bool good = std::find(good_finishers.begin(), good_finishers.end(),
                                level) != good_finishers.end();
    alphas.push_back(good ? 2.0 : 0.0);
  }
  return alphas;
}

ModelSpec make_model_spec(const features::DesignMatrix& design,
                          const std::vector<std::string>& selected_players,
                          const std::vector<std::string>& good_finishers) {
  ModelSpec spec;
  spec.predictors = design.columns.size() > 3 ? features::PredictorSet::extended
                                              : features::PredictorSet::baseline;
  spec.grouping = design.grouping;
  spec.selected_players = selected_players;
  spec.intercept_prior = Normal{0.0, 5.0};
  spec.coef_priors = default_priors(design);
  if (design.grouping == features::Grouping::position) {
    spec.group_alpha = default_position_alphas();
  } else if (design.grouping == features::Grouping::player) {
    spec.group_alpha = player_alphas(design.group_levels, good_finishers);
  }
  return spec;
}

std::vector<PriorDist> uniform_priors(const features::DesignMatrix& design,
                                      double a, double b) {
  return std::vector<PriorDist>(design.columns.size(), Uniform{a, b});
}

std::vector<PriorDist> normal_priors(const features::DesignMatrix& design,
                                     double mu, double sigma) {
  return std::vector<PriorDist>(design.columns.size(), Normal{mu, sigma});
}

std::vector<PriorDist> ill_suited_priors(const features::DesignMatrix& design) {
  std::vector<PriorDist> priors;
  priors.reserve(design.columns.size());
  for (const auto& c : design.columns) {
    switch (c.source) {
      case Predictor::distance:
        priors.push_back(SkewNormal{0.0, 0.25, 2.0});
        break;
      case Predictor::angle:
        priors.push_back(Normal{0.0, 0.25});
        break;
      case Predictor::interaction:
        priors.push_back(SkewNormal{0.0, 0.25, -2.0});
        break;
      case Predictor::gk_distance:
        priors.push_back(Normal{0.0, 0.25});
        break;
      case Predictor::players_in_triangle:
        // Reversed ladder: 0 players -> -5 up to +5.
        priors.push_back(
            SkewNormal{0.0, 0.25, -5.0 + static_cast<double>(c.level)});
        break;
      case Predictor::opponents_in_radius:
        priors.push_back(
            SkewNormal{0.0, 0.25, 1.0 - static_cast<double>(c.level)});
        break;
      case Predictor::gk_in_triangle:
        priors.push_back(SkewNormal{0.0, 0.25, 2.0});
        break;
      case Predictor::one_on_one:
        priors.push_back(SkewNormal{0.0, 0.25, -2.0});
        break;
      case Predictor::open_goal:
        priors.push_back(SkewNormal{0.0, 0.25, -4.0});
        break;
      case Predictor::under_pressure:
        priors.push_back(SkewNormal{0.0, 0.25, 2.0});
        break;
      default:
        priors.push_back(Normal{0.0, 0.25});
        break;
    }
  }
  return priors;
}

std::vector<PriorCase> sensitivity_prior_cases(const features::DesignMatrix& design) {
  std::vector<PriorCase> cases;
  cases.push_back({"existing", Normal{0.0, 5.0}, default_priors(design)});
  cases.push_back({"wide_uniform", Uniform{-100.0, 100.0},
                   uniform_priors(design, -100.0, 100.0)});
  cases.push_back(
      {"tight_uniform", Uniform{-1.0, 1.0}, uniform_priors(design, -1.0, 1.0)});
  cases.push_back(
      {"wide_normal", Normal{0.0, 10.0}, normal_priors(design, 0.0, 10.0)});
  cases.push_back(
      {"tight_normal", Normal{0.0, 0.25}, normal_priors(design, 0.0, 0.25)});
  cases.push_back(
      {"ill_suited", SkewNormal{0.0, 0.25, 2.0}, ill_suited_priors(design)});
  return cases;
}

}  // namespace bayesxg::bayes
