#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "bayesxg/features.hpp"
#include "bayesxg/types.hpp"

namespace bayesxg::synth {

/// Ground-truth configuration for synthetic shot data. Coefficients are
/// expressed on the design-matrix scale (standardized columns, one-hot
/// levels), so recovered fits compare against them directly.
struct TruthConfig {
  features::PredictorSet predictors = features::PredictorSet::baseline;
  features::GroupingSpec grouping;
  double intercept = -2.0;
  /// Per design column; empty means all zeros.
  Eigen::VectorXd betas;
  /// Logit-scale offset per group level (including the trailing "other"
  /// level under player grouping). Empty means all zeros.
  std::vector<double> group_offsets;
  int n = 1000;
  std::uint64_t seed = 1;
  /// Number of distinct pooled shooters beyond the selected ones when
  /// grouping by player.
  int other_player_pool = 20;
};

struct SyntheticData {
  std::vector<FeatureRow> rows;          // outcome_goal filled in
  features::DesignMatrix design;         // the matrix outcomes were drawn from
  Eigen::VectorXd true_probability;
  Eigen::VectorXd outcomes;
};

/// Draw feature rows with independent per-feature samplers over realistic
/// pitch bounds, then outcomes from Bernoulli(inverse-logit(eta)) with
/// eta = intercept + X*betas + group offset. The rows' statsbomb_xg column
/// is set to the true probability so metric code has a reference column.
SyntheticData generate_shots(const TruthConfig& config);

}  // namespace bayesxg::synth
