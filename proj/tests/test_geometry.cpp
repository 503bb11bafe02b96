#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bayesxg/errors.hpp"
#include "bayesxg/features.hpp"
#include "bayesxg/geometry.hpp"
#include "bayesxg/rng.hpp"

using namespace bayesxg;

namespace {

// Independent membership oracle: barycentric coordinates of the point with
// respect to the (shot, post, post) triangle.
bool barycentric_inside(Point p, Point shot) {
  const Point a = shot;
  const Point b = geom::kPostLow;
  const Point c = geom::kPostHigh;
  const double det = (b.y - c.y) * (a.x - c.x) + (c.x - b.x) * (a.y - c.y);
  const double l1 = ((b.y - c.y) * (p.x - c.x) + (c.x - b.x) * (p.y - c.y)) / det;
  const double l2 = ((c.y - a.y) * (p.x - c.x) + (a.x - c.x) * (p.y - c.y)) / det;
  const double l3 = 1.0 - l1 - l2;
  return l1 >= 0.0 && l2 >= 0.0 && l3 >= 0.0;
}

}  // namespace

TEST_CASE("distance to goal") {
  CHECK(geom::distance_to_goal({119.0, 40.0}) == doctest::Approx(1.0));
  CHECK(geom::distance_to_goal({108.0, 40.0}) == doctest::Approx(12.0));
  // 9-12-15 right triangle checked by hand.
  CHECK(geom::distance_to_goal({111.0, 28.0}) == doctest::Approx(15.0));
  CHECK_THROWS_AS(geom::distance_to_goal({120.0, 40.0}), OutOfBoundsError);
  CHECK_THROWS_AS(geom::distance_to_goal({-1.0, 40.0}), OutOfBoundsError);
  CHECK_THROWS_AS(geom::distance_to_goal({60.0, 81.0}), OutOfBoundsError);
}

TEST_CASE("shot angle from the law of cosines") {
  // Hand computation at (108, 40): both post distances are sqrt(160),
  // cos = (160 + 160 - 64) / (2 * 160) = 0.8.
  const double expected = std::acos(0.8) * 180.0 / M_PI;  // 36.8698976458...
  CHECK(std::fabs(geom::shot_angle({108.0, 40.0}) - expected) < 1e-6);
  CHECK(geom::shot_angle({112.0, 32.0}) ==
        doctest::Approx(geom::shot_angle({112.0, 48.0})).epsilon(1e-12));
  CHECK_THROWS_AS(geom::shot_angle({120.0, 41.0}), GoalLineShotError);
}

TEST_CASE("angle decreases with distance along the center line") {
  double previous = 180.0;
  for (double x = 119.0; x >= 60.0; x -= 1.0) {
    const double angle = geom::shot_angle({x, 40.0});
    CHECK(angle < previous);
    previous = angle;
  }
}

TEST_CASE("triangle membership examples") {
  CHECK(geom::point_in_shot_triangle({118.0, 40.0}, {108.0, 40.0}));
  // The shot location itself is a vertex and counts as inside.
  CHECK(geom::point_in_shot_triangle({108.0, 40.0}, {108.0, 40.0}));
  CHECK_FALSE(geom::point_in_shot_triangle({100.0, 40.0}, {108.0, 40.0}));
  // Post vertices and a point on the goal-line edge.
  CHECK(geom::point_in_shot_triangle({120.0, 36.0}, {108.0, 40.0}));
  CHECK(geom::point_in_shot_triangle({120.0, 40.0}, {108.0, 40.0}));
}

TEST_CASE("triangle membership agrees with the barycentric oracle") {
  Rng rng(4242);
  int inside_count = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Point shot{rng.uniform(0.0, 119.999), rng.uniform(0.0, 80.0)};
    const Point p{rng.uniform(0.0, 120.0), rng.uniform(0.0, 80.0)};
    const bool mine = geom::point_in_shot_triangle(p, shot);
    const bool oracle = barycentric_inside(p, shot);
    CHECK(mine == oracle);
    inside_count += mine ? 1 : 0;
  }
  CHECK(inside_count > 0);
}

TEST_CASE("freeze frame features") {
  RawShot shot;
  shot.location = {108.0, 40.0};

  SUBCASE("empty frame falls back") {
    const auto f = features::freeze_frame_features(shot);
    CHECK(f.keeper_missing);
    CHECK(f.gk_distance_to_goal == 0.0);
    CHECK_FALSE(f.gk_in_shot_triangle);
    CHECK(f.players_in_shot_triangle == 0);
    CHECK(f.opponents_in_radius == 0);
  }

  SUBCASE("keeper in the triangle") {
    shot.freeze_frame.push_back({{118.0, 40.0}, false, true, "GK", "Goalkeeper"});
    const auto f = features::freeze_frame_features(shot);
    CHECK_FALSE(f.keeper_missing);
    CHECK(f.gk_distance_to_goal == doctest::Approx(2.0));
    CHECK(f.gk_in_shot_triangle);
    CHECK(f.players_in_shot_triangle == 1);
  }

  SUBCASE("radius counts opponents only, boundary inclusive") {
    shot.freeze_frame.push_back({{108.5, 40.0}, false, false, "Opp", "Center Back"});
    shot.freeze_frame.push_back({{108.5, 39.9}, true, false, "Mate", "Center Forward"});
    shot.freeze_frame.push_back({{109.0, 40.0}, false, false, "OnEdge", "Center Back"});
    shot.freeze_frame.push_back({{110.5, 40.0}, false, false, "Far", "Center Back"});
    const auto f = features::freeze_frame_features(shot);
    CHECK(f.opponents_in_radius == 2);
  }

  SUBCASE("teammates count toward the triangle total") {
    shot.freeze_frame.push_back({{114.0, 40.0}, true, false, "Mate", "Center Forward"});
    shot.freeze_frame.push_back({{115.0, 40.0}, false, false, "Opp", "Center Back"});
    shot.freeze_frame.push_back({{80.0, 10.0}, false, false, "Away", "Center Back"});
    const auto f = features::freeze_frame_features(shot);
    CHECK(f.players_in_shot_triangle == 2);
  }
}

TEST_CASE("general position mapping") {
  using features::map_general_position;
  CHECK(map_general_position("Right Wing") == GeneralPosition::AM);
  CHECK(map_general_position("Left Wing Back") == GeneralPosition::D);
  CHECK(map_general_position("Goalkeeper") == GeneralPosition::D);
  CHECK(map_general_position("Center Forward") == GeneralPosition::ST);
  CHECK(map_general_position("Center Defensive Midfield") == GeneralPosition::M);
  CHECK(map_general_position("Left Midfield") == GeneralPosition::M);
  CHECK(map_general_position("Center Attacking Midfield") == GeneralPosition::AM);
  CHECK_THROWS_AS(map_general_position("Sweeper Libero"), UnknownPositionError);
}

TEST_CASE("body part resolution") {
  using features::resolve_body_part;
  CHECK(resolve_body_part(BodyPartRaw::left_foot, Foot::left) ==
        BodyPart::preferred_foot);
  CHECK(resolve_body_part(BodyPartRaw::left_foot, Foot::right) ==
        BodyPart::other_foot);
  CHECK(resolve_body_part(BodyPartRaw::right_foot, Foot::right) ==
        BodyPart::preferred_foot);
  CHECK(resolve_body_part(BodyPartRaw::head, Foot::left) == BodyPart::head);
  CHECK(resolve_body_part(BodyPartRaw::other, Foot::right) == BodyPart::other);
}
