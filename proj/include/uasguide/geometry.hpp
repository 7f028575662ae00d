#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uasguide {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Largest per-step heading change, radians (30 degrees either way).
inline constexpr double kMaxHeadingChange = kPi / 6.0;

// Simulation tick, seconds. Distances below are "per step" with this tick.
inline constexpr double kTimeStep = 1.0;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  bool operator==(const Vec2&) const = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double squared_norm() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kPi;
}

// Counterclockwise rotation by `angle`.
inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Rotation given the unit direction (c, s) of the frame's x-axis; applies the
// frame-aligning (i.e. inverse) rotation. Avoids the atan2 -> cos/sin round
// trip, which keeps "the goal lands on the +x axis" tight to machine epsilon.
inline Vec2 rotate_into_frame(Vec2 v, double c, double s) {
  return {c * v.x + s * v.y, -s * v.x + c * v.y};
}

// Heading update: commanded change is clamped to the 30-degree envelope and the
// result wrapped to (-pi, pi].
inline double apply_heading_action(double heading, double a_h) {
  const double d = std::clamp(a_h, -kMaxHeadingChange, kMaxHeadingChange);
  return wrap_angle(heading + d);
}

struct Pose {
  Vec2 position;
  double heading = 0.0;  // radians, world frame
  double speed = 0.0;    // world units per second
};

// Constant-speed straight step over one tick.
inline Vec2 step_position(const Pose& p) {
  return {p.position.x + p.speed * kTimeStep * std::cos(p.heading),
          p.position.y + p.speed * kTimeStep * std::sin(p.heading)};
}

// Direction cosines of the agent->goal axis. Degenerate when the agent sits on
// the goal; callers pass the previous frame angle as the fallback.
struct FrameAxis {
  double c = 1.0;
  double s = 0.0;
  bool degenerate = false;
};

inline FrameAxis goal_frame_axis(Vec2 agent, Vec2 goal, double fallback_angle) {
  const Vec2 d = goal - agent;
  const double r = d.norm();
  if (r == 0.0) {
    return {std::cos(fallback_angle), std::sin(fallback_angle), true};
  }
  return {d.x / r, d.y / r, false};
}

// Robot-centric transform: translate so the agent is at the origin, rotate so
// the agent->goal direction becomes +x. Velocities skip the translation.
inline Vec2 to_robot_frame(Vec2 p, Vec2 agent, const FrameAxis& f,
                           bool is_velocity = false) {
  const Vec2 rel = is_velocity ? p : p - agent;
  return rotate_into_frame(rel, f.c, f.s);
}

}  // namespace uasguide
