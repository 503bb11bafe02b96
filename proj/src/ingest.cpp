#include "bayesxg/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "bayesxg/errors.hpp"
#include "bayesxg/features.hpp"
#include "bayesxg/geometry.hpp"

namespace bayesxg::ingest {

namespace {

using nlohmann::json;

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

// Open-play patterns kept; corners, free kicks, throw-ins, kick-offs and
// keeper-related patterns are set-piece context and dropped.
bool open_play_pattern(const std::string& pattern) {
  return pattern == "Regular Play" || pattern == "From Counter" ||
         pattern == "Other";
}

BodyPartRaw body_part_from_event(const std::string& name) {
  if (name == "Left Foot") return BodyPartRaw::left_foot;
  if (name == "Right Foot") return BodyPartRaw::right_foot;
  if (name == "Head") return BodyPartRaw::head;
  return BodyPartRaw::other;
}

Technique technique_from_event(const std::string& name) {
  if (name == "Half Volley") return Technique::half_volley;
  if (name == "Volley") return Technique::volley;
  if (name == "Lob") return Technique::lob;
  if (name == "Overhead Kick") return Technique::overhead_kick;
  if (name == "Diving Header") return Technique::diving_header;
  if (name == "Backheel") return Technique::backheel;
  return Technique::normal;
}

Point point_from_location(const json& location, const std::string& context) {
  if (!location.is_array() || location.size() < 2) {
    throw ParseError("bad location array in " + context);
  }
  Point p{location[0].get<double>(), location[1].get<double>()};
  if (!geom::within_pitch(p)) {
    throw ParseError("location outside the 120x80 frame in " + context + ": (" +
                     std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
  }
  return p;
}

void scan_event_file(const std::filesystem::path& path, int competition_id,
                     int season_id, std::int64_t match_id, EventScan& scan) {
  const json events = load_json_file(path);
  if (!events.is_array()) {
    throw ParseError("event file is not an array: " + path.string());
  }
  int array_index = -1;
  for (const auto& ev : events) {
    ++array_index;
    ++scan.events_seen;
    const std::string type = ev.contains("type") && ev["type"].contains("name")
                                 ? ev["type"]["name"].get<std::string>()
                                 : "";
    const std::string player =
        ev.contains("player") && ev["player"].contains("name")
            ? ev["player"]["name"].get<std::string>()
            : "";

    if (!player.empty() && ev.contains("position") &&
        ev["position"].contains("name")) {
      ++scan.position_counts[player][ev["position"]["name"].get<std::string>()];
    }

    if (type == "Pass" && !player.empty() && ev.contains("pass") &&
        ev["pass"].contains("body_part") &&
        ev["pass"]["body_part"].contains("name")) {
      const std::string foot = ev["pass"]["body_part"]["name"].get<std::string>();
      if (foot == "Left Foot") ++scan.pass_foot_counts[player][0];
      if (foot == "Right Foot") ++scan.pass_foot_counts[player][1];
    }

    if (type != "Shot") continue;
    ++scan.shots_seen;
    if (!ev.contains("shot")) continue;
    const json& shot = ev["shot"];

    const std::string shot_type =
        shot.contains("type") && shot["type"].contains("name")
            ? shot["type"]["name"].get<std::string>()
            : "";
    if (shot_type != "Open Play") continue;

    const std::string pattern =
        ev.contains("play_pattern") && ev["play_pattern"].contains("name")
            ? ev["play_pattern"]["name"].get<std::string>()
            : "";
    if (!open_play_pattern(pattern)) continue;

    if (!shot.contains("freeze_frame")) {
      ++scan.skipped_missing_freeze_frame;
      continue;
    }

    RawShot raw;
    raw.competition_id = competition_id;
    raw.season_id = season_id;
    raw.match_id = match_id;
    raw.event_index = ev.contains("index") && ev["index"].is_number()
                          ? ev["index"].get<int>()
                          : array_index;
    raw.shooter_name = player;
    raw.shooter_position_raw =
        ev.contains("position") && ev["position"].contains("name")
            ? ev["position"]["name"].get<std::string>()
            : "";
    raw.location = point_from_location(ev.at("location"), path.string());
    if (raw.location.x == geom::kPitchLength) {
      // Goal-line shots have a degenerate shot triangle.
      ++scan.skipped_goal_line;
      continue;
    }
    raw.body_part_raw =
        shot.contains("body_part") && shot["body_part"].contains("name")
            ? body_part_from_event(shot["body_part"]["name"].get<std::string>())
            : BodyPartRaw::other;
    raw.technique =
        shot.contains("technique") && shot["technique"].contains("name")
            ? technique_from_event(shot["technique"]["name"].get<std::string>())
            : Technique::normal;
    raw.first_time = shot.value("first_time", false);
    raw.one_on_one = shot.value("one_on_one", false);
    raw.open_goal = shot.value("open_goal", false);
    raw.under_pressure = ev.value("under_pressure", false);
    raw.play_pattern = pattern;
    raw.outcome_goal = shot.contains("outcome") &&
                       shot["outcome"].contains("name") &&
                       shot["outcome"]["name"].get<std::string>() == "Goal";
    raw.statsbomb_xg = shot.value("statsbomb_xg", 0.0);
    if (raw.statsbomb_xg < 0.0 || raw.statsbomb_xg > 1.0) {
      throw ParseError("statsbomb_xg outside [0,1] in " + path.string());
    }

    for (const auto& entry : shot["freeze_frame"]) {
      FreezeFramePlayer ffp;
      ffp.location = point_from_location(entry.at("location"), path.string());
      ffp.teammate = entry.value("teammate", false);
      ffp.player_name = entry.contains("player") && entry["player"].contains("name")
                            ? entry["player"]["name"].get<std::string>()
                            : "";
      ffp.position_name =
          entry.contains("position") && entry["position"].contains("name")
              ? entry["position"]["name"].get<std::string>()
              : "";
      ffp.is_keeper = ffp.position_name == "Goalkeeper";
      raw.freeze_frame.push_back(std::move(ffp));
    }
    scan.shots.push_back(std::move(raw));
  }
}

}  // namespace

std::vector<CompetitionRef> load_competitions(
    const std::filesystem::path& data_dir) {
  const auto path = data_dir / "competitions.json";
  if (!std::filesystem::exists(path)) throw MissingFileError(path.string());
  const json doc = load_json_file(path);
  if (!doc.is_array()) throw ParseError("competitions.json is not an array");
  std::vector<CompetitionRef> comps;
  comps.reserve(doc.size());
  for (const auto& entry : doc) {
    CompetitionRef ref;
    try {
      ref.competition_id = entry.at("competition_id").get<int>();
      ref.season_id = entry.at("season_id").get<int>();
      const std::string gender = entry.at("competition_gender").get<std::string>();
      ref.gender = gender == "male" ? Gender::male : Gender::female;
      ref.name = entry.value("competition_name", "");
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad competition entry: ") + e.what());
    }
    if (ref.competition_id < 0 || ref.season_id < 0) {
      throw ParseError("negative competition or season id");
    }
    comps.push_back(std::move(ref));
  }
  return comps;
}

EventScan scan_events(const std::filesystem::path& data_dir,
                      const std::vector<CompetitionRef>& competitions) {
  for (const auto& c : competitions) {
    if (c.gender != Gender::male) {
      throw std::invalid_argument("scan restricted to men's competitions: " +
                                  c.name);
    }
  }
  EventScan scan;
  // (match_id, competition, season); a match is scanned once.
  std::set<std::int64_t> seen;
  for (const auto& comp : competitions) {
    const auto matches_path = data_dir / "matches" /
                              std::to_string(comp.competition_id) /
                              (std::to_string(comp.season_id) + ".json");
    if (!std::filesystem::exists(matches_path)) {
      scan.warnings.push_back("missing matches file: " + matches_path.string());
      continue;
    }
    const json matches = load_json_file(matches_path);
    if (!matches.is_array()) {
      throw ParseError("matches file is not an array: " + matches_path.string());
    }
    for (const auto& match : matches) {
      if (!match.contains("match_id")) continue;
      const auto match_id = match["match_id"].get<std::int64_t>();
      if (!seen.insert(match_id).second) continue;
      const auto events_path =
          data_dir / "events" / (std::to_string(match_id) + ".json");
      if (!std::filesystem::exists(events_path)) {
        scan.warnings.push_back("missing events file: " + events_path.string());
        continue;
      }
      scan_event_file(events_path, comp.competition_id, comp.season_id, match_id,
                      scan);
    }
  }
  std::sort(scan.shots.begin(), scan.shots.end(),
            [](const RawShot& a, const RawShot& b) {
              if (a.match_id != b.match_id) return a.match_id < b.match_id;
              return a.event_index < b.event_index;
            });
  return scan;
}

std::vector<RawShot> extract_shots(const std::filesystem::path& data_dir,
                                   const std::vector<CompetitionRef>& competitions) {
  return scan_events(data_dir, competitions).shots;
}

std::string modal_position(const EventScan& scan, const std::string& player,
                           bool* tie) {
  const auto it = scan.position_counts.find(player);
  if (it == scan.position_counts.end() || it->second.empty()) {
    throw UnknownPlayerError(player);
  }
  const std::string* best = nullptr;
  int best_count = -1;
  bool tied = false;
  for (const auto& [label, count] : it->second) {
    if (count > best_count) {
      best = &label;
      best_count = count;
      tied = false;
    } else if (count == best_count) {
      tied = true;  // map order keeps the lexicographically first label
    }
  }
  if (tie != nullptr) *tie = tied;
  return *best;
}

std::string modal_position(const std::filesystem::path& data_dir,
                           const std::string& player) {
  auto comps = load_competitions(data_dir);
  std::erase_if(comps, [](const CompetitionRef& c) { return c.gender != Gender::male; });
  const EventScan scan = scan_events(data_dir, comps);
  return modal_position(scan, player);
}

Foot infer_preferred_foot(const EventScan& scan, const std::string& player,
                          bool* flagged) {
  const auto it = scan.pass_foot_counts.find(player);
  const long left = it == scan.pass_foot_counts.end() ? 0 : it->second[0];
  const long right = it == scan.pass_foot_counts.end() ? 0 : it->second[1];
  if (flagged != nullptr) *flagged = left == right;  // includes the no-pass case
  if (left > right) return Foot::left;
  return Foot::right;
}

Foot infer_preferred_foot(const std::filesystem::path& data_dir,
                          const std::string& player) {
  auto comps = load_competitions(data_dir);
  std::erase_if(comps, [](const CompetitionRef& c) { return c.gender != Gender::male; });
  const EventScan scan = scan_events(data_dir, comps);
  return infer_preferred_foot(scan, player);
}

std::vector<FeatureRow> build_feature_rows(const EventScan& scan,
                                           PipelineFlags* flags) {
  // Per-player lookups resolved once.
  std::unordered_map<std::string, std::string> modal;
  std::unordered_map<std::string, Foot> feet;
  std::vector<FeatureRow> rows;
  rows.reserve(scan.shots.size());
  for (const auto& shot : scan.shots) {
    auto pos_it = modal.find(shot.shooter_name);
    if (pos_it == modal.end()) {
      bool tie = false;
      bool fallback = false;
      pos_it = modal.emplace(shot.shooter_name,
                             modal_position(scan, shot.shooter_name, &tie)).first;
      feet.emplace(shot.shooter_name,
                   infer_preferred_foot(scan, shot.shooter_name, &fallback));
      if (flags != nullptr) {
        flags->position_ties += tie ? 1 : 0;
        flags->foot_fallbacks += fallback ? 1 : 0;
      }
    }
    rows.push_back(features::build_feature_row(shot, pos_it->second,
                                               feet.at(shot.shooter_name)));
    if (flags != nullptr && rows.back().gk_distance_to_goal == 0.0 &&
        !rows.back().gk_in_shot_triangle) {
      const auto& frame = shot.freeze_frame;
      const bool has_keeper =
          std::any_of(frame.begin(), frame.end(), [](const FreezeFramePlayer& p) {
            return p.is_keeper && !p.teammate;
          });
      if (!has_keeper) ++flags->keeperless_frames;
    }
  }
  return rows;
}

}  // namespace bayesxg::ingest
