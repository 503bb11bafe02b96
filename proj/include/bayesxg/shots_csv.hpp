#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "bayesxg/types.hpp"

namespace bayesxg {

/// Canonical shots file: one row per shot, header below, booleans as 0/1,
/// floats with 6 decimals, enums as text labels. Both the ingest pipeline
/// and the synthetic generator emit this format; every downstream command
/// consumes it.
///
///   competition_id,season_id,match_id,event_index,player,general_position,
///   position_raw,x,y,distance_to_goal,shot_angle,gk_distance_to_goal,
///   gk_in_shot_triangle,players_in_shot_triangle,opponents_in_radius,
///   body_part_raw,body_part,preferred_foot,technique,first_time,one_on_one,
///   open_goal,under_pressure,play_pattern,goal,statsbomb_xg
void write_shots_csv(const std::vector<FeatureRow>& rows, std::ostream& out);
void write_shots_csv(const std::vector<FeatureRow>& rows,
                     const std::filesystem::path& path);

std::vector<FeatureRow> read_shots_csv(std::istream& in);
std::vector<FeatureRow> read_shots_csv(const std::filesystem::path& path);

}  // namespace bayesxg
