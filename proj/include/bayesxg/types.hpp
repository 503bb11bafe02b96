#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bayesxg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class Gender { male, female };

struct CompetitionRef {
  int competition_id = 0;
  int season_id = 0;
  Gender gender = Gender::male;
  std::string name;
};

enum class BodyPartRaw { left_foot, right_foot, head, other };
enum class BodyPart { preferred_foot, other_foot, head, other };
enum class Foot { left, right };

enum class Technique {
  normal,
  half_volley,
  volley,
  lob,
  overhead_kick,
  diving_header,
  backheel,
};
inline constexpr int kTechniqueLevels = 7;

enum class GeneralPosition { ST, AM, M, D };
inline constexpr int kPositionLevels = 4;

struct FreezeFramePlayer {
  Point location;
  bool teammate = false;
  bool is_keeper = false;
  std::string player_name;
  std::string position_name;
};

/// One open-play shot as read from the event stream, before feature
/// engineering.
struct RawShot {
  int competition_id = 0;
  int season_id = 0;
  std::int64_t match_id = 0;
  int event_index = 0;
  std::string shooter_name;
  std::string shooter_position_raw;
  Point location;
  BodyPartRaw body_part_raw = BodyPartRaw::other;
  Technique technique = Technique::normal;
  bool first_time = false;
  bool one_on_one = false;
  bool open_goal = false;
  bool under_pressure = false;
  std::string play_pattern;
  bool outcome_goal = false;
  double statsbomb_xg = 0.0;
  std::vector<FreezeFramePlayer> freeze_frame;
};

/// Engineered predictors for one shot; the unit of the canonical shots CSV.
struct FeatureRow {
  int competition_id = 0;
  int season_id = 0;
  std::int64_t match_id = 0;
  int event_index = 0;
  std::string player_name;
  GeneralPosition general_position = GeneralPosition::ST;
  std::string position_raw;  // per-event raw label
  Point location;
  double distance_to_goal = 0.0;
  double shot_angle = 0.0;  // degrees
  double gk_distance_to_goal = 0.0;
  bool gk_in_shot_triangle = false;
  int players_in_shot_triangle = 0;
  int opponents_in_radius = 0;
  BodyPartRaw body_part_raw = BodyPartRaw::other;
  BodyPart body_part = BodyPart::other;
  Foot preferred_foot = Foot::right;
  Technique technique = Technique::normal;
  bool first_time = false;
  bool one_on_one = false;
  bool open_goal = false;
  bool under_pressure = false;
  std::string play_pattern;
  bool outcome_goal = false;
  double statsbomb_xg = 0.0;
};

// Text labels used in CSV files and reports. Parsers throw ParseError on
// unknown labels.
std::string to_label(Gender g);
std::string to_label(BodyPartRaw b);
std::string to_label(BodyPart b);
std::string to_label(Foot f);
std::string to_label(Technique t);
std::string to_label(GeneralPosition p);

Gender gender_from_label(const std::string& s);
BodyPartRaw body_part_raw_from_label(const std::string& s);
BodyPart body_part_from_label(const std::string& s);
Foot foot_from_label(const std::string& s);
Technique technique_from_label(const std::string& s);
GeneralPosition position_from_label(const std::string& s);

}  // namespace bayesxg
