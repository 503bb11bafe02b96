#include "bayesxg/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bayesxg/errors.hpp"
#include "bayesxg/geometry.hpp"

namespace bayesxg::features {

namespace {

const std::unordered_map<std::string, GeneralPosition>& position_map() {
  static const std::unordered_map<std::string, GeneralPosition> map = {
      {"Goalkeeper", GeneralPosition::D},
      {"Right Back", GeneralPosition::D},
      {"Right Center Back", GeneralPosition::D},
      {"Center Back", GeneralPosition::D},
      {"Left Center Back", GeneralPosition::D},
      {"Left Back", GeneralPosition::D},
      {"Right Wing Back", GeneralPosition::D},
      {"Left Wing Back", GeneralPosition::D},
      {"Right Defensive Midfield", GeneralPosition::M},
      {"Center Defensive Midfield", GeneralPosition::M},
      {"Left Defensive Midfield", GeneralPosition::M},
      {"Right Midfield", GeneralPosition::M},
      {"Right Center Midfield", GeneralPosition::M},
      {"Center Midfield", GeneralPosition::M},
      {"Left Center Midfield", GeneralPosition::M},
      {"Left Midfield", GeneralPosition::M},
      {"Right Attacking Midfield", GeneralPosition::AM},
      {"Center Attacking Midfield", GeneralPosition::AM},
      {"Left Attacking Midfield", GeneralPosition::AM},
      {"Right Wing", GeneralPosition::AM},
      {"Left Wing", GeneralPosition::AM},
      {"Right Center Forward", GeneralPosition::ST},
      {"Center Forward", GeneralPosition::ST},
      {"Left Center Forward", GeneralPosition::ST},
      {"Secondary Striker", GeneralPosition::ST},
      {"Striker", GeneralPosition::ST},
  };
  return map;
}

struct OneHotSpec {
  Predictor source;
  std::string prefix;
  int n_levels;                        // including the reference level 0
  std::vector<std::string> level_names;
};

int categorical_level(const FeatureRow& row, Predictor source) {
  switch (source) {
    case Predictor::players_in_triangle:
      return std::min(row.players_in_shot_triangle, kPlayersTriangleCap);
    case Predictor::opponents_in_radius:
      return std::min(row.opponents_in_radius, kOpponentsRadiusCap);
    case Predictor::body_part:
      return static_cast<int>(row.body_part);
    case Predictor::technique:
      return static_cast<int>(row.technique);
    default:
      return 0;
  }
}

double boolean_value(const FeatureRow& row, Predictor source) {
  switch (source) {
    case Predictor::first_time: return row.first_time ? 1.0 : 0.0;
    case Predictor::gk_in_triangle: return row.gk_in_shot_triangle ? 1.0 : 0.0;
    case Predictor::one_on_one: return row.one_on_one ? 1.0 : 0.0;
    case Predictor::open_goal: return row.open_goal ? 1.0 : 0.0;
    case Predictor::under_pressure: return row.under_pressure ? 1.0 : 0.0;
    default: return 0.0;
  }
}

void standardize_column(Eigen::MatrixXd& X, Eigen::Index j, Column& meta) {
  const Eigen::Index n = X.rows();
  const double mean = X.col(j).mean();
  const double var = (X.col(j).array() - mean).square().sum() / static_cast<double>(n);
  const double sd = std::sqrt(var);
  if (!(sd > 0.0)) throw ConstantColumnError(meta.name);
  X.col(j) = (X.col(j).array() - mean) / sd;
  meta.mean = mean;
  meta.sd = sd;
}

}  // namespace

FreezeFrameFeatures freeze_frame_features(const RawShot& shot) {
  FreezeFrameFeatures out;
  const FreezeFramePlayer* keeper = nullptr;
  for (const auto& p : shot.freeze_frame) {
    if (!p.teammate && p.is_keeper) {
      keeper = &p;
      break;
    }
  }
  if (keeper != nullptr) {
    out.gk_distance_to_goal = geom::distance(keeper->location, geom::kGoalCenter);
    out.gk_in_shot_triangle =
        geom::point_in_shot_triangle(keeper->location, shot.location);
  } else {
    out.keeper_missing = true;
  }
  for (const auto& p : shot.freeze_frame) {
    if (geom::point_in_shot_triangle(p.location, shot.location)) {
      ++out.players_in_shot_triangle;
    }
    if (!p.teammate &&
        geom::distance(p.location, shot.location) <= kOpponentRadius) {
      ++out.opponents_in_radius;
    }
  }
  return out;
}

GeneralPosition map_general_position(const std::string& raw_position) {
  const auto& map = position_map();
  auto it = map.find(raw_position);
  if (it == map.end()) throw UnknownPositionError(raw_position);
  return it->second;
}

BodyPart resolve_body_part(BodyPartRaw raw, Foot preferred_foot) {
  switch (raw) {
    case BodyPartRaw::head: return BodyPart::head;
    case BodyPartRaw::other: return BodyPart::other;
    case BodyPartRaw::left_foot:
      return preferred_foot == Foot::left ? BodyPart::preferred_foot
                                          : BodyPart::other_foot;
    case BodyPartRaw::right_foot:
      return preferred_foot == Foot::right ? BodyPart::preferred_foot
                                           : BodyPart::other_foot;
  }
  return BodyPart::other;
}

FeatureRow build_feature_row(const RawShot& shot,
                             const std::string& modal_position_raw,
                             Foot preferred_foot) {
  FeatureRow row;
  row.competition_id = shot.competition_id;
  row.season_id = shot.season_id;
  row.match_id = shot.match_id;
  row.event_index = shot.event_index;
  row.player_name = shot.shooter_name;
  row.general_position = map_general_position(modal_position_raw);
  row.position_raw = shot.shooter_position_raw;
  row.location = shot.location;
  row.distance_to_goal = geom::distance_to_goal(shot.location);
  row.shot_angle = geom::shot_angle(shot.location);
  const FreezeFrameFeatures ff = freeze_frame_features(shot);
  row.gk_distance_to_goal = ff.gk_distance_to_goal;
  row.gk_in_shot_triangle = ff.gk_in_shot_triangle;
  row.players_in_shot_triangle = ff.players_in_shot_triangle;
  row.opponents_in_radius = ff.opponents_in_radius;
  row.body_part_raw = shot.body_part_raw;
  row.preferred_foot = preferred_foot;
  row.body_part = resolve_body_part(shot.body_part_raw, preferred_foot);
  row.technique = shot.technique;
  row.first_time = shot.first_time;
  row.one_on_one = shot.one_on_one;
  row.open_goal = shot.open_goal;
  row.under_pressure = shot.under_pressure;
  row.play_pattern = shot.play_pattern;
  row.outcome_goal = shot.outcome_goal;
  row.statsbomb_xg = shot.statsbomb_xg;
  return row;
}

DesignMatrix build_design_matrix(const std::vector<FeatureRow>& rows,
                                 PredictorSet set,
                                 const GroupingSpec& grouping) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  DesignMatrix out;
  out.grouping = grouping.kind;

  std::vector<Column> columns;
  columns.push_back({"distance_to_goal", Predictor::distance, 0, true, 0.0, 1.0});
  columns.push_back({"shot_angle", Predictor::angle, 0, true, 0.0, 1.0});
  columns.push_back(
      {"distance_angle_interaction", Predictor::interaction, 0, true, 0.0, 1.0});

  if (set == PredictorSet::extended) {
    columns.push_back(
        {"gk_distance_to_goal", Predictor::gk_distance, 0, true, 0.0, 1.0});
    // One-hot blocks, reference level dropped. Levels absent from this data
    // subset are dropped as well instead of producing all-zero columns.
    std::vector<int> players_count(kPlayersTriangleCap + 1, 0);
    std::vector<int> opponents_count(kOpponentsRadiusCap + 1, 0);
    std::vector<int> body_count(4, 0);
    std::vector<int> technique_count(kTechniqueLevels, 0);
    for (const auto& r : rows) {
      ++players_count[categorical_level(r, Predictor::players_in_triangle)];
      ++opponents_count[categorical_level(r, Predictor::opponents_in_radius)];
      ++body_count[categorical_level(r, Predictor::body_part)];
      ++technique_count[categorical_level(r, Predictor::technique)];
    }
    for (int level = 1; level <= kPlayersTriangleCap; ++level) {
      if (players_count[level] == 0) continue;
      columns.push_back({"players_in_shot_triangle_" + std::to_string(level),
                         Predictor::players_in_triangle, level, false, 0.0, 1.0});
    }
    for (int level = 1; level <= kOpponentsRadiusCap; ++level) {
      if (opponents_count[level] == 0) continue;
      columns.push_back({"opponents_in_radius_" + std::to_string(level),
                         Predictor::opponents_in_radius, level, false, 0.0, 1.0});
    }
    for (int level = 1; level < 4; ++level) {
      if (body_count[level] == 0) continue;
      columns.push_back({"body_part_" + to_label(static_cast<BodyPart>(level)),
                         Predictor::body_part, level, false, 0.0, 1.0});
    }
    columns.push_back({"shot_first_time", Predictor::first_time, 0, false, 0.0, 1.0});
    columns.push_back(
        {"gk_in_shot_triangle", Predictor::gk_in_triangle, 0, false, 0.0, 1.0});
    columns.push_back({"shot_one_on_one", Predictor::one_on_one, 0, false, 0.0, 1.0});
    columns.push_back({"shot_open_goal", Predictor::open_goal, 0, false, 0.0, 1.0});
    for (int level = 1; level < kTechniqueLevels; ++level) {
      if (technique_count[level] == 0) continue;
      columns.push_back({"technique_" + to_label(static_cast<Technique>(level)),
                         Predictor::technique, level, false, 0.0, 1.0});
    }
    columns.push_back(
        {"under_pressure", Predictor::under_pressure, 0, false, 0.0, 1.0});
  }

  const Eigen::Index p = static_cast<Eigen::Index>(columns.size());
  out.X.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Column& col = columns[j];
    for (Eigen::Index i = 0; i < n; ++i) {
      const FeatureRow& r = rows[static_cast<std::size_t>(i)];
      double v = 0.0;
      switch (col.source) {
        case Predictor::distance: v = r.distance_to_goal; break;
        case Predictor::angle: v = r.shot_angle; break;
        case Predictor::interaction: v = r.distance_to_goal * r.shot_angle; break;
        case Predictor::gk_distance: v = r.gk_distance_to_goal; break;
        case Predictor::players_in_triangle:
        case Predictor::opponents_in_radius:
        case Predictor::body_part:
        case Predictor::technique:
          v = categorical_level(r, col.source) == col.level ? 1.0 : 0.0;
          break;
        default: v = boolean_value(r, col.source); break;
      }
      out.X(i, j) = v;
    }
  }

  for (Eigen::Index j = 0; j < p; ++j) {
    if (columns[j].continuous) {
      standardize_column(out.X, j, columns[j]);
    } else {
      const double first = out.X(0, j);
      if (n > 0 && (out.X.col(j).array() == first).all()) {
        throw ConstantColumnError(columns[j].name);
      }
    }
  }
  out.columns = std::move(columns);

  if (grouping.kind == Grouping::position) {
    out.group_levels = {"ST", "AM", "M", "D"};
    out.group_index.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.group_index(i) =
          static_cast<int>(rows[static_cast<std::size_t>(i)].general_position);
    }
  } else if (grouping.kind == Grouping::player) {
    if (grouping.selected_players.empty()) {
      throw GroupMismatchError("player grouping requires a non-empty selection");
    }
    out.group_levels = grouping.selected_players;
    out.group_levels.push_back("other");
    std::unordered_map<std::string, int> level_of;
    for (std::size_t k = 0; k < grouping.selected_players.size(); ++k) {
      level_of[grouping.selected_players[k]] = static_cast<int>(k);
    }
    const int other = static_cast<int>(grouping.selected_players.size());
    out.group_index.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto it = level_of.find(rows[static_cast<std::size_t>(i)].player_name);
      out.group_index(i) = it == level_of.end() ? other : it->second;
    }
  }
  return out;
}

std::string to_label(PredictorSet set) {
  return set == PredictorSet::baseline ? "baseline" : "extended";
}

std::string to_label(Grouping g) {
  switch (g) {
    case Grouping::none: return "none";
    case Grouping::position: return "position";
    case Grouping::player: return "player";
  }
  return "none";
}

PredictorSet predictor_set_from_label(const std::string& s) {
  if (s == "baseline") return PredictorSet::baseline;
  if (s == "extended") return PredictorSet::extended;
  throw ParseError("unknown predictor set: " + s);
}

Grouping grouping_from_label(const std::string& s) {
  if (s == "none") return Grouping::none;
  if (s == "position") return Grouping::position;
  if (s == "player") return Grouping::player;
  throw ParseError("unknown grouping: " + s);
}

}  // namespace bayesxg::features
