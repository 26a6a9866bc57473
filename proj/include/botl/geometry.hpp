#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace botl {

/// Planar position in meters.
using Point2 = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Maps any finite angle onto (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  if (r > kPi) r -= kTwoPi;
  return r;
}

/// Four-quadrant bearing of `to` seen from `from`, counterclockwise from +x,
/// in (-pi, pi]. Callers guarantee the points differ.
inline double bearing_unchecked(const Point2& from, const Point2& to) {
  const double a = std::atan2(to.y() - from.y(), to.x() - from.x());
  return a == -kPi ? kPi : a;
}

/// Rotation by `angle` followed by translation by `offset`.
struct RigidMotion {
  double angle = 0.0;
  Point2 offset = Point2::Zero();

  Point2 apply(const Point2& p) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return Point2(c * p.x() - s * p.y(), s * p.x() + c * p.y()) + offset;
  }
  double apply_bearing(double theta) const { return wrap_angle(theta + angle); }
};

}  // namespace botl
