#include "bayesxg/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "bayesxg/geometry.hpp"
#include "bayesxg/glm.hpp"
#include "bayesxg/rng.hpp"

namespace bayesxg::synth {

namespace {

const char* raw_position_for(GeneralPosition p) {
  switch (p) {
    case GeneralPosition::ST: return "Center Forward";
    case GeneralPosition::AM: return "Center Attacking Midfield";
    case GeneralPosition::M: return "Center Midfield";
    case GeneralPosition::D: return "Center Back";
  }
  return "Center Forward";
}

}  // namespace

SyntheticData generate_shots(const TruthConfig& config) {
  if (config.n < 1) throw std::invalid_argument("n must be >= 1");
  Rng rng(config.seed);
  SyntheticData out;
  out.rows.reserve(static_cast<std::size_t>(config.n));

  const bool by_player = config.grouping.kind == features::Grouping::player;
  const int n_selected = static_cast<int>(config.grouping.selected_players.size());
  if (by_player && n_selected == 0) {
    throw std::invalid_argument("player grouping requires selected players");
  }

  for (int i = 0; i < config.n; ++i) {
    FeatureRow r;
    r.competition_id = 0;
    r.season_id = 0;
    r.match_id = 1 + i / 30;  // ~30 shots per synthetic match
    r.event_index = i;
    r.play_pattern = "Regular Play";

    // Realistic attacking-third location; distance and angle follow from it.
    r.location.x = rng.uniform(60.0, 119.5);
    r.location.y = rng.uniform(4.0, 76.0);
    r.distance_to_goal = geom::distance_to_goal(r.location);
    r.shot_angle = geom::shot_angle(r.location);
    r.gk_distance_to_goal = rng.uniform(0.0, 12.0);
    r.gk_in_shot_triangle = rng.bernoulli(0.9);
    r.players_in_shot_triangle =
        static_cast<int>(rng.uniform_int(0, features::kPlayersTriangleCap));
    r.opponents_in_radius =
        static_cast<int>(rng.uniform_int(0, features::kOpponentsRadiusCap));
    r.body_part = static_cast<BodyPart>(rng.uniform_int(0, 3));
    r.body_part_raw = r.body_part == BodyPart::head ? BodyPartRaw::head
                      : r.body_part == BodyPart::other
                          ? BodyPartRaw::other
                          : (r.body_part == BodyPart::preferred_foot
                                 ? BodyPartRaw::right_foot
                                 : BodyPartRaw::left_foot);
    r.preferred_foot = Foot::right;
    r.technique = static_cast<Technique>(rng.uniform_int(0, kTechniqueLevels - 1));
    r.first_time = rng.bernoulli(0.33);
    r.one_on_one = rng.bernoulli(0.06);
    r.open_goal = rng.bernoulli(0.01);
    r.under_pressure = rng.bernoulli(0.25);

    if (by_player) {
      // Selected players get even shares; the pooled remainder matches the
      // selected volume so "other" stays the largest level.
      const int pick = static_cast<int>(rng.uniform_int(0, 2 * n_selected - 1));
      if (pick < n_selected) {
        r.player_name = config.grouping.selected_players[static_cast<std::size_t>(pick)];
      } else {
        r.player_name =
            "Pool Player " +
            std::to_string(rng.uniform_int(1, config.other_player_pool));
      }
      r.general_position = GeneralPosition::ST;
    } else {
      r.player_name = "Synthetic Player";
      r.general_position = static_cast<GeneralPosition>(rng.uniform_int(0, 3));
    }
    r.position_raw = raw_position_for(r.general_position);
    out.rows.push_back(std::move(r));
  }

  out.design = features::build_design_matrix(out.rows, config.predictors,
                                             config.grouping);
  const Eigen::Index p = out.design.cols();
  Eigen::VectorXd betas = config.betas;
  if (betas.size() == 0) betas = Eigen::VectorXd::Zero(p);
  if (betas.size() != p) {
    throw std::invalid_argument(
        "betas size " + std::to_string(betas.size()) +
        " does not match design columns " + std::to_string(p));
  }
  std::vector<double> offsets = config.group_offsets;
  if (config.grouping.kind != features::Grouping::none) {
    if (offsets.empty()) offsets.assign(out.design.group_levels.size(), 0.0);
    if (offsets.size() != out.design.group_levels.size()) {
      throw std::invalid_argument("group_offsets size does not match levels");
    }
  }

  Eigen::VectorXd eta =
      Eigen::VectorXd::Constant(out.design.rows(), config.intercept) +
      out.design.X * betas;
  if (config.grouping.kind != features::Grouping::none) {
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      eta(i) += offsets[static_cast<std::size_t>(out.design.group_index(i))];
    }
  }

  out.true_probability.resize(eta.size());
  out.outcomes.resize(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double pr = glm::inverse_logit(eta(i));
    out.true_probability(i) = pr;
    const bool goal = rng.bernoulli(pr);
    out.outcomes(i) = goal ? 1.0 : 0.0;
    auto& row = out.rows[static_cast<std::size_t>(i)];
    row.outcome_goal = goal;
    row.statsbomb_xg = pr;
  }
  return out;
}

}  // namespace bayesxg::synth
