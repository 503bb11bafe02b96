#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "bayesxg/bayes/fit.hpp"
#include "bayesxg/bayes/model.hpp"
#include "bayesxg/glm.hpp"
#include "bayesxg/types.hpp"

namespace bayesxg::analysis {

/// Mean of (p_i - y_i)^2.
double brier(const Eigen::VectorXd& p, const Eigen::VectorXd& y);

struct RegressionMetrics {
  double rmse = 0.0;
  double mae = 0.0;
  double r2 = 0.0;
};

/// Standard definitions against a reference prediction column; r2 about the
/// reference mean.
RegressionMetrics regression_metrics(const Eigen::VectorXd& pred,
                                     const Eigen::VectorXd& reference);

/// Mean signed deviation, positive = overprediction vs the reference.
double msd(const Eigen::VectorXd& pred, const Eigen::VectorXd& reference);

struct GroupAdjustment {
  std::string level;
  long count = 0;
  double mean = 0.0;
  double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
};

struct BinPoint {
  std::string level;
  double bin_low = 0.0;
  long count = 0;
  double mean_adjustment = 0.0;
};

struct AdjustmentReport {
  Eigen::VectorXd per_shot;  // hierarchical minus baseline
  double overall_mean = 0.0;
  std::vector<GroupAdjustment> groups;
  std::vector<BinPoint> distance_curve;  // 5-unit distance bins
  std::vector<BinPoint> angle_curve;     // 10-degree angle bins
};

/// Per-shot xG adjustments with per-group distributions and binned
/// point-estimate curves against distance and angle.
AdjustmentReport xg_adjustments(const Eigen::VectorXd& hier_pred,
                                const Eigen::VectorXd& baseline_pred,
                                const Eigen::VectorXi& group_index,
                                const std::vector<std::string>& group_levels,
                                const Eigen::VectorXd& distance,
                                const Eigen::VectorXd& angle);

struct TheoreticalAdjustment {
  std::string level;
  long count = 0;
  double share = 0.0;          // empirical P(position)
  double lift = 0.0;           // P(position | goal) / P(position)
  double mean_adjustment = 0.0;
};

/// Adjust baseline predictions through the conditional-probability lift of
/// each group and report the mean per-group shift; adjusted values are
/// clamped to [0, 1] before differencing. Throws EmptyGroupError when a
/// level has no shots or the data has no goals.
std::vector<TheoreticalAdjustment> bayes_theorem_adjustment(
    const Eigen::VectorXd& baseline_pred, const Eigen::VectorXi& group_index,
    const std::vector<std::string>& group_levels, const Eigen::VectorXd& outcomes);

struct ConversionRow {
  std::string player;
  long shots = 0;
  long goals = 0;
  double rate = 0.0;  // goals / shots
};

/// Players with at least `min_shots` shots, sorted by conversion rate
/// descending (ties by shots, then name, for a stable order).
std::vector<ConversionRow> select_players(const std::vector<FeatureRow>& rows,
                                          long min_shots = 50);

struct PlayerTotals {
  std::string player;
  long shots = 0;
  long goals = 0;
  double baseline_xg = 0.0;
  double adjusted_xg = 0.0;
};

/// Per-player goals vs summed baseline and hierarchical predictions.
/// Players absent from the rows yield zero totals; requesting a player
/// absent from both rows and group levels throws MissingPlayerError.
std::vector<PlayerTotals> totals_report(const std::vector<std::string>& players,
                                        const std::vector<FeatureRow>& rows,
                                        const Eigen::VectorXd& baseline_pred,
                                        const Eigen::VectorXd& adjusted_pred,
                                        const std::vector<std::string>& group_levels);

struct PriorCaseResult {
  std::string name;
  bool ok = false;
  std::string error;
  Eigen::VectorXd mean_prediction;    // per shot
  Eigen::VectorXd per_draw_msd;       // vs the frequentist reference
  double pred_q25 = 0.0, pred_q50 = 0.0, pred_q75 = 0.0;
  double pred_iqr = 0.0;
  double msd_q25 = 0.0, msd_q50 = 0.0, msd_q75 = 0.0;
  double msd_iqr = 0.0;
  double mean_accept = 0.0;
  int divergences = 0;
};

/// Refit the extended single-level model under each prior configuration and
/// compare predictions with the frequentist extended fit. Sampler failures
/// are recorded per case without aborting the others. Seeds are derived per
/// case from config.seed.
std::vector<PriorCaseResult> prior_sensitivity(
    const features::DesignMatrix& design, const Eigen::VectorXd& outcomes,
    const Eigen::VectorXd& reference_pred, const bayes::SamplerConfig& config);

struct SweepPoint {
  int n_columns = 0;
  std::string last_column;
  double brier = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double r2 = 0.0;
};

/// Metric trajectory as design columns are added one at a time in canonical
/// order (distance first).
std::vector<SweepPoint> feature_count_sweep(const features::DesignMatrix& extended,
                                            const Eigen::VectorXd& outcomes,
                                            const Eigen::VectorXd& reference);

}  // namespace bayesxg::analysis
