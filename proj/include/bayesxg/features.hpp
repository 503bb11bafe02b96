#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "bayesxg/types.hpp"

namespace bayesxg::features {

/// Counts above these caps are merged into the top one-hot level so rare
/// columns do not collapse on league subsets.
inline constexpr int kPlayersTriangleCap = 10;
inline constexpr int kOpponentsRadiusCap = 3;
inline constexpr double kOpponentRadius = 1.0;

enum class PredictorSet { baseline, extended };

enum class Grouping { none, position, player };

struct GroupingSpec {
  Grouping kind = Grouping::none;
  /// Player grouping only: named levels in order; every other shooter is
  /// pooled into a trailing "other" level.
  std::vector<std::string> selected_players;
};

enum class Predictor {
  distance,
  angle,
  interaction,
  gk_distance,
  players_in_triangle,
  opponents_in_radius,
  body_part,
  technique,
  first_time,
  gk_in_triangle,
  one_on_one,
  open_goal,
  under_pressure,
};

struct Column {
  std::string name;
  Predictor source;
  int level = 0;           // categorical level this column indicates
  bool continuous = false;
  double mean = 0.0;       // standardization metadata; identity for 0/1 columns
  double sd = 1.0;
};

/// Numeric design matrix: continuous columns standardized, categoricals
/// one-hot with the reference level dropped, no intercept column (the
/// fitters add it).
struct DesignMatrix {
  Eigen::MatrixXd X;
  std::vector<Column> columns;
  Eigen::VectorXi group_index;           // empty when ungrouped
  std::vector<std::string> group_levels;
  Grouping grouping = Grouping::none;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }
  /// Raw (unstandardized) value of column j in row i.
  double raw(Eigen::Index i, Eigen::Index j) const {
    return X(i, j) * columns[j].sd + columns[j].mean;
  }
};

struct FreezeFrameFeatures {
  double gk_distance_to_goal = 0.0;
  bool gk_in_shot_triangle = false;
  int players_in_shot_triangle = 0;
  int opponents_in_radius = 0;
  bool keeper_missing = false;  // fallback values in effect
};

/// Freeze-frame derived predictors. When no opposing keeper is present the
/// gk fields fall back to distance 0 / not-in-triangle and the flag is set.
FreezeFrameFeatures freeze_frame_features(const RawShot& shot);

/// Collapse a raw StatsBomb position label into the four general classes.
/// Wingers count as attacking midfielders, wing-backs and goalkeepers as
/// defenders. Throws UnknownPositionError for unmapped labels.
GeneralPosition map_general_position(const std::string& raw_position);

BodyPart resolve_body_part(BodyPartRaw raw, Foot preferred_foot);

/// Assemble the full engineered row for one shot. modal_position_raw is the
/// shooter's most frequent raw position label across all their events.
FeatureRow build_feature_row(const RawShot& shot,
                             const std::string& modal_position_raw,
                             Foot preferred_foot);

/// Build the numeric design matrix for a predictor set. One-hot levels with
/// zero occupancy in `rows` are dropped; constant continuous or boolean
/// columns raise ConstantColumnError.
DesignMatrix build_design_matrix(const std::vector<FeatureRow>& rows,
                                 PredictorSet set,
                                 const GroupingSpec& grouping = {});

std::string to_label(PredictorSet set);
std::string to_label(Grouping g);
PredictorSet predictor_set_from_label(const std::string& s);
Grouping grouping_from_label(const std::string& s);

}  // namespace bayesxg::features
