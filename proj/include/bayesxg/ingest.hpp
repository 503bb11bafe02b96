#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "bayesxg/types.hpp"

namespace bayesxg::ingest {

/// Read competitions.json from an open-data directory. Every
/// (competition, season) pair is returned with its gender tag.
/// Throws MissingFileError / ParseError.
std::vector<CompetitionRef> load_competitions(const std::filesystem::path& data_dir);

/// One pass over the event files of the selected competitions: open-play
/// shots plus the per-player tallies needed for modal positions and
/// preferred feet.
struct EventScan {
  std::vector<RawShot> shots;  // sorted by (match_id, event index)
  /// player -> raw position label -> appearances (ordered map so that ties
  /// break to the lexicographically first label).
  std::unordered_map<std::string, std::map<std::string, int>> position_counts;
  /// player -> {left-foot passes, right-foot passes}.
  std::unordered_map<std::string, std::array<long, 2>> pass_foot_counts;
  long events_seen = 0;
  long shots_seen = 0;
  long skipped_missing_freeze_frame = 0;
  long skipped_goal_line = 0;
  std::vector<std::string> warnings;
};

/// Scan every match of the given competitions (which must all be men's).
EventScan scan_events(const std::filesystem::path& data_dir,
                      const std::vector<CompetitionRef>& competitions);

/// Open-play shots only; penalties, set-piece patterns and goal-line shots
/// are excluded, shots without a freeze frame skipped and counted.
std::vector<RawShot> extract_shots(const std::filesystem::path& data_dir,
                                   const std::vector<CompetitionRef>& competitions);

/// Most frequent raw position label across a player's events; ties break
/// to the lexicographically first label (flagged when `tie` is given).
/// Throws UnknownPlayerError if the player never appears with a position.
std::string modal_position(const EventScan& scan, const std::string& player,
                           bool* tie = nullptr);
std::string modal_position(const std::filesystem::path& data_dir,
                           const std::string& player);

/// Foot with the strictly larger pass count; right with a flag on ties or
/// when the player has no recorded passes.
Foot infer_preferred_foot(const EventScan& scan, const std::string& player,
                          bool* flagged = nullptr);
Foot infer_preferred_foot(const std::filesystem::path& data_dir,
                          const std::string& player);

struct PipelineFlags {
  long position_ties = 0;       // modal position broken lexicographically
  long foot_fallbacks = 0;      // tied or absent pass counts -> right foot
  long keeperless_frames = 0;   // freeze frames without an opposing keeper
};

/// Full pipeline: engineered feature rows for every scanned shot, with
/// modal positions and preferred feet resolved from the same scan.
/// Deterministic tie-breaks are tallied in `flags` when given.
std::vector<FeatureRow> build_feature_rows(const EventScan& scan,
                                           PipelineFlags* flags = nullptr);

}  // namespace bayesxg::ingest
