#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "bayesxg/errors.hpp"
#include "bayesxg/ingest.hpp"

using namespace bayesxg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json obj_name(const std::string& name) { return json{{"name", name}}; }

json pass_event(int index, const std::string& player, const std::string& position,
                const std::string& foot) {
  return json{{"index", index},
              {"type", obj_name("Pass")},
              {"player", obj_name(player)},
              {"position", obj_name(position)},
              {"location", {60.0, 40.0}},
              {"pass", {{"body_part", obj_name(foot)}}}};
}

json shot_event(int index, const std::string& player, const std::string& position,
                double x, double y, const std::string& shot_type,
                const std::string& pattern, bool goal,
                bool with_freeze_frame = true) {
  json shot = {{"type", obj_name(shot_type)},
               {"statsbomb_xg", 0.35},
               {"outcome", obj_name(goal ? "Goal" : "Saved")},
               {"body_part", obj_name("Left Foot")},
               {"technique", obj_name("Half Volley")},
               {"first_time", true}};
  if (with_freeze_frame) {
    shot["freeze_frame"] = json::array(
        {{{"location", {118.0, 40.0}},
          {"player", obj_name("The Keeper")},
          {"position", obj_name("Goalkeeper")},
          {"teammate", false}},
         {{"location", {114.0, 41.0}},
          {"player", obj_name("A Defender")},
          {"position", obj_name("Center Back")},
          {"teammate", false}},
         {{"location", {108.4, 40.2}},
          {"player", obj_name("A Mate")},
          {"position", obj_name("Center Midfield")},
          {"teammate", true}}});
  }
  return json{{"index", index},
              {"type", obj_name("Shot")},
              {"play_pattern", obj_name(pattern)},
              {"player", obj_name(player)},
              {"position", obj_name(position)},
              {"location", {x, y}},
              {"under_pressure", true},
              {"shot", shot}};
}

struct OpenDataFixture {
  fs::path root;

  OpenDataFixture() {
    root = fs::temp_directory_path() /
           ("bayesxg_ingest_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(root / "matches" / "2");
    fs::create_directories(root / "events");

    write(root / "competitions.json",
          json::array({{{"competition_id", 2},
                        {"season_id", 44},
                        {"competition_gender", "male"},
                        {"competition_name", "Premier League"}},
                       {{"competition_id", 37},
                        {"season_id", 90},
                        {"competition_gender", "female"},
                        {"competition_name", "FA Women's Super League"}}}));

    write(root / "matches" / "2" / "44.json",
          json::array({{{"match_id", 1002}}, {{"match_id", 1001}}}));

    // Match 1001: passes for foot inference plus a mix of shots.
    json events1 = json::array();
    events1.push_back(pass_event(1, "Alice Striker", "Center Forward", "Left Foot"));
    events1.push_back(pass_event(2, "Alice Striker", "Center Forward", "Left Foot"));
    events1.push_back(pass_event(3, "Alice Striker", "Center Forward", "Right Foot"));
    events1.push_back(pass_event(4, "Bob Winger", "Right Wing", "Right Foot"));
    events1.push_back(pass_event(5, "Bob Winger", "Right Wing", "Left Foot"));
    // Kept: open-play shot.
    events1.push_back(shot_event(6, "Alice Striker", "Center Forward", 108.0,
                                 40.0, "Open Play", "Regular Play", true));
    // Excluded: penalty, set-piece pattern, goal-line shot.
    events1.push_back(shot_event(7, "Alice Striker", "Center Forward", 108.0,
                                 40.0, "Penalty", "Regular Play", false));
    events1.push_back(shot_event(8, "Bob Winger", "Right Wing", 110.0, 35.0,
                                 "Open Play", "From Corner", false));
    events1.push_back(shot_event(9, "Bob Winger", "Right Wing", 120.0, 39.0,
                                 "Open Play", "Regular Play", false));
    // Skipped with a counter: open play but no freeze frame.
    events1.push_back(shot_event(10, "Bob Winger", "Right Wing", 100.0, 30.0,
                                 "Open Play", "From Counter", false, false));
    // Kept: second open-play shot, different pattern spelling.
    events1.push_back(shot_event(11, "Bob Winger", "Left Wing", 102.0, 36.0,
                                 "Open Play", "From Counter", false));
    write(root / "events" / "1001.json", events1);

    // Match 1002: passes only.
    json events2 = json::array();
    events2.push_back(pass_event(1, "Carol Back", "Left Wing Back", "Left Foot"));
    events2.push_back(pass_event(2, "Carol Back", "Left Wing Back", "Right Foot"));
    write(root / "events" / "1002.json", events2);
  }

  ~OpenDataFixture() { fs::remove_all(root); }

  static void write(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    out << doc.dump(1);
  }

  std::vector<CompetitionRef> male_comps() const {
    auto comps = ingest::load_competitions(root);
    std::erase_if(comps,
                  [](const CompetitionRef& c) { return c.gender != Gender::male; });
    return comps;
  }
};

}  // namespace

TEST_CASE("load_competitions reads both genders") {
  OpenDataFixture fx;
  const auto comps = ingest::load_competitions(fx.root);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].competition_id == 2);
  CHECK(comps[0].gender == Gender::male);
  CHECK(comps[1].gender == Gender::female);
  CHECK(comps[0].name == "Premier League");
}

TEST_CASE("load_competitions error paths") {
  OpenDataFixture fx;
  SUBCASE("missing file") {
    CHECK_THROWS_AS(ingest::load_competitions(fx.root / "nowhere"),
                    MissingFileError);
  }
  SUBCASE("malformed JSON") {
    std::ofstream(fx.root / "competitions.json") << "{not json";
    CHECK_THROWS_AS(ingest::load_competitions(fx.root), ParseError);
  }
  SUBCASE("empty array") {
    std::ofstream(fx.root / "competitions.json") << "[]";
    CHECK(ingest::load_competitions(fx.root).empty());
  }
}

TEST_CASE("extract_shots keeps only qualifying open-play shots") {
  OpenDataFixture fx;
  const auto scan = ingest::scan_events(fx.root, fx.male_comps());
  REQUIRE(scan.shots.size() == 2);
  CHECK(scan.skipped_missing_freeze_frame == 1);
  CHECK(scan.skipped_goal_line == 1);

  // Deterministic ordering: (match_id, event index).
  CHECK(scan.shots[0].event_index == 6);
  CHECK(scan.shots[1].event_index == 11);

  const auto& shot = scan.shots[0];
  CHECK(shot.match_id == 1001);
  CHECK(shot.shooter_name == "Alice Striker");
  CHECK(shot.location.x == doctest::Approx(108.0));
  CHECK(shot.outcome_goal);
  CHECK(shot.statsbomb_xg == doctest::Approx(0.35));
  CHECK(shot.body_part_raw == BodyPartRaw::left_foot);
  CHECK(shot.technique == Technique::half_volley);
  CHECK(shot.first_time);
  CHECK(shot.under_pressure);
  CHECK(shot.play_pattern == "Regular Play");
  REQUIRE(shot.freeze_frame.size() == 3);
  CHECK(shot.freeze_frame[0].is_keeper);
  CHECK_FALSE(shot.freeze_frame[0].teammate);

  // Re-running the scan yields the identical list.
  const auto scan2 = ingest::scan_events(fx.root, fx.male_comps());
  REQUIRE(scan2.shots.size() == scan.shots.size());
  for (std::size_t i = 0; i < scan.shots.size(); ++i) {
    CHECK(scan2.shots[i].match_id == scan.shots[i].match_id);
    CHECK(scan2.shots[i].event_index == scan.shots[i].event_index);
  }
}

TEST_CASE("female competitions are rejected by the scan") {
  OpenDataFixture fx;
  const auto all = ingest::load_competitions(fx.root);
  CHECK_THROWS_AS(ingest::scan_events(fx.root, all), std::invalid_argument);
}

TEST_CASE("modal position with majority, tie, and unknown player") {
  OpenDataFixture fx;
  const auto scan = ingest::scan_events(fx.root, fx.male_comps());

  bool tie = false;
  CHECK(ingest::modal_position(scan, "Alice Striker", &tie) == "Center Forward");
  CHECK_FALSE(tie);

  // Bob appears 4 times at Right Wing and once at Left Wing; majority wins.
  CHECK(ingest::modal_position(scan, "Bob Winger", &tie) == "Right Wing");
  CHECK_FALSE(tie);

  // Carol has exactly one pass per position label -> tie, lexicographic first.
  CHECK(ingest::modal_position(scan, "Carol Back", &tie) == "Left Wing Back");

  CHECK_THROWS_AS(ingest::modal_position(scan, "Nobody"), UnknownPlayerError);
}

TEST_CASE("preferred foot inference") {
  OpenDataFixture fx;
  const auto scan = ingest::scan_events(fx.root, fx.male_comps());

  bool flagged = true;
  CHECK(ingest::infer_preferred_foot(scan, "Alice Striker", &flagged) == Foot::left);
  CHECK_FALSE(flagged);

  // Bob has one pass per foot -> tie -> right, flagged.
  CHECK(ingest::infer_preferred_foot(scan, "Bob Winger", &flagged) == Foot::right);
  CHECK(flagged);

  // The keeper never passes -> fallback right, flagged.
  CHECK(ingest::infer_preferred_foot(scan, "The Keeper", &flagged) == Foot::right);
  CHECK(flagged);
}

TEST_CASE("feature rows come out of the full pipeline") {
  OpenDataFixture fx;
  const auto scan = ingest::scan_events(fx.root, fx.male_comps());
  const auto rows = ingest::build_feature_rows(scan);
  REQUIRE(rows.size() == 2);

  const auto& alice = rows[0];
  CHECK(alice.general_position == GeneralPosition::ST);
  // Left-footed shot from a left-preferring player.
  CHECK(alice.body_part == BodyPart::preferred_foot);
  CHECK(alice.distance_to_goal == doctest::Approx(12.0));
  CHECK(alice.gk_distance_to_goal == doctest::Approx(2.0));
  CHECK(alice.gk_in_shot_triangle);
  CHECK(alice.players_in_shot_triangle == 2);  // keeper + defender
  CHECK(alice.opponents_in_radius == 0);

  const auto& bob = rows[1];
  CHECK(bob.general_position == GeneralPosition::AM);  // modal Right Wing
  CHECK(bob.body_part == BodyPart::other_foot);        // left shot, right pref
  CHECK(bob.play_pattern == "From Counter");

  // Invariants: men's competitions, open-play patterns, off the goal line.
  for (const auto& r : rows) {
    CHECK(r.competition_id == 2);
    CHECK(r.location.x < 120.0);
    CHECK((r.play_pattern == "Regular Play" || r.play_pattern == "From Counter" ||
           r.play_pattern == "Other"));
  }
}

TEST_CASE("malformed event files raise ParseError") {
  OpenDataFixture fx;
  std::ofstream(fx.root / "events" / "1001.json") << "[{\"broken\": ";
  CHECK_THROWS_AS(ingest::scan_events(fx.root, fx.male_comps()), ParseError);
}

TEST_CASE("out-of-frame locations are rejected") {
  OpenDataFixture fx;
  json events = json::array();
  events.push_back(shot_event(1, "Alice Striker", "Center Forward", 125.0, 40.0,
                              "Open Play", "Regular Play", false));
  OpenDataFixture::write(fx.root / "events" / "1001.json", events);
  CHECK_THROWS_AS(ingest::scan_events(fx.root, fx.male_comps()), ParseError);
}

TEST_CASE("missing event files are warnings, not failures") {
  OpenDataFixture fx;
  fs::remove(fx.root / "events" / "1002.json");
  const auto scan = ingest::scan_events(fx.root, fx.male_comps());
  CHECK(scan.shots.size() == 2);
  REQUIRE(scan.warnings.size() == 1);
  CHECK(scan.warnings[0].find("1002") != std::string::npos);
}

TEST_CASE("directory-level spec signatures") {
  OpenDataFixture fx;
  CHECK(ingest::modal_position(fx.root, "Alice Striker") == "Center Forward");
  CHECK(ingest::infer_preferred_foot(fx.root, "Alice Striker") == Foot::left);
  const auto shots = ingest::extract_shots(fx.root, fx.male_comps());
  CHECK(shots.size() == 2);
}
