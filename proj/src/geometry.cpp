#include "bayesxg/geometry.hpp"

#include <cmath>
#include <sstream>

#include "bayesxg/errors.hpp"

namespace bayesxg::geom {

namespace {

std::string format_point(Point p) {
  std::ostringstream out;
  out << "(" << p.x << ", " << p.y << ")";
  return out.str();
}

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance_to_goal(Point location) {
  if (!within_pitch(location) || location.x >= kPitchLength) {
    throw OutOfBoundsError("shot location outside pitch or on the goal line: " +
                           format_point(location));
  }
  return distance(location, kGoalCenter);
}

double shot_angle(Point location) {
  if (location.x == kPitchLength) throw GoalLineShotError();
  const double a = distance(location, kPostLow);
  const double b = distance(location, kPostHigh);
  const double c = distance(kPostLow, kPostHigh);
  double cos_angle = (a * a + b * b - c * c) / (2.0 * a * b);
  cos_angle = std::fmin(1.0, std::fmax(-1.0, cos_angle));
  return std::acos(cos_angle) * 180.0 / M_PI;
}

bool point_in_shot_triangle(Point point, Point shot_location) {
  // Signed areas against each edge; all non-negative or all non-positive
  // means inside or on the boundary.
  const double d1 = cross(shot_location, kPostLow, point);
  const double d2 = cross(kPostLow, kPostHigh, point);
  const double d3 = cross(kPostHigh, shot_location, point);
  const bool has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
  const bool has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
  return !(has_neg && has_pos);
}

}  // namespace bayesxg::geom
