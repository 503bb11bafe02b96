#pragma once

#include "bayesxg/types.hpp"

namespace bayesxg::geom {

// StatsBomb pitch frame: 120 x 80, goal on the x = 120 line.
inline constexpr double kPitchLength = 120.0;
inline constexpr double kPitchWidth = 80.0;
inline constexpr Point kGoalCenter{120.0, 40.0};
inline constexpr Point kPostLow{120.0, 36.0};
inline constexpr Point kPostHigh{120.0, 44.0};

inline constexpr bool within_pitch(Point p) {
  return p.x >= 0.0 && p.x <= kPitchLength && p.y >= 0.0 && p.y <= kPitchWidth;
}

double distance(Point a, Point b);

/// Shooter's distance to the goal center. The location must be on the
/// pitch with x < 120 (OutOfBoundsError otherwise).
double distance_to_goal(Point location);

/// Angle in degrees subtended at the shooter by the two goalposts, from
/// the law of cosines on the (shooter, post, post) triangle. Throws
/// GoalLineShotError for x = 120 where the triangle degenerates.
double shot_angle(Point location);

/// Inclusive membership test for the triangle spanned by the shot location
/// and the two goalposts; edges and vertices count as inside.
bool point_in_shot_triangle(Point point, Point shot_location);

}  // namespace bayesxg::geom
