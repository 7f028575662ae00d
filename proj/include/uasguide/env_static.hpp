#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uasguide/geometry.hpp"
#include "uasguide/rng.hpp"
#include "uasguide/scenario.hpp"

namespace uasguide {

enum class Outcome { kOngoing, kGoal, kConflict, kTimeout };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kOngoing: return "ongoing";
    case Outcome::kGoal: return "goal";
    case Outcome::kConflict: return "conflict";
    case Outcome::kTimeout: return "timeout";
  }
  return "?";
}

enum class StateClass { kOngoing, kGoal, kConflict };

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  bool done = false;
  Outcome outcome = Outcome::kOngoing;
  double distance_to_goal = 0.0;  // world units of the environment
  double min_intruder_distance = std::numeric_limits<double>::quiet_NaN();
  bool in_conflict = false;
};

// Reward for the static-obstacle task. d_g arrives in reward units (the
// environment divides meters by its scenario's reward_unit_m before calling).
//   goal:     +10
//   conflict: -0.001*d_g - 0.05 - 16
//   ongoing:  -0.001*d_g - 0.05
inline double reward_static(double d_g, StateClass cls) {
  if (cls == StateClass::kGoal) return 10.0;
  const double base = -0.001 * d_g - 0.05;
  return cls == StateClass::kConflict ? base - 16.0 : base;
}

// Position-uncertainty model, pure form: with the first uniform draw u the
// nominal position is kept (u < 1 - probability) or displaced by `radius` at
// angle 2*pi*phi (phi the second uniform draw in [0,1)).
inline Vec2 perturb_position(Vec2 nominal, double radius, double probability,
                             double u, double phi) {
  if (u < 1.0 - probability) return nominal;
  const double ang = kTwoPi * phi;
  return {nominal.x + radius * std::cos(ang), nominal.y + radius * std::sin(ang)};
}

// Walks the airspace perimeter clockwise from the lower-left corner (up the
// west edge, east along the north edge, down the east edge, west along the
// south edge) and returns the point at arc distance `d`.
inline Vec2 perimeter_point(Vec2 lo, Vec2 hi, double d) {
  const double lx = hi.x - lo.x;
  const double ly = hi.y - lo.y;
  const double total = 2.0 * (lx + ly);
  d = std::fmod(d, total);
  if (d < 0.0) d += total;
  if (d < ly) return {lo.x, lo.y + d};
  d -= ly;
  if (d < lx) return {lo.x + d, hi.y};
  d -= lx;
  if (d < ly) return {hi.x, hi.y - d};
  d -= ly;
  return {hi.x - d, lo.y};
}

class StaticEnv {
 public:
  using ScenarioType = StaticScenario;

  StaticEnv(StaticScenario scenario, std::uint64_t seed)
      : scenario_(std::move(scenario)), rng_(seed) {
    scenario_.validate();
  }

  int observation_dim() const {
    return 3 + 2 * static_cast<int>(scenario_.obstacles.size());
  }
  int action_dim() const { return 1; }

  const StaticScenario& scenario() const { return scenario_; }
  const Pose& pose() const { return pose_; }
  bool started() const { return started_; }
  bool done() const { return done_; }
  Outcome outcome() const { return outcome_; }
  int steps() const { return steps_; }
  double episode_return() const { return episode_return_; }
  double distance_to_goal() const { return distance(pose_.position, scenario_.goal); }
  const Eigen::VectorXd& current_observation() const { return current_obs_; }

  // Random start on the airspace boundary: integer perimeter positions
  // (1 m spacing), resampled until conflict-free.
  Eigen::VectorXd reset() {
    const double perimeter = 2.0 * ((scenario_.airspace_max.x - scenario_.airspace_min.x) +
                                    (scenario_.airspace_max.y - scenario_.airspace_min.y));
    const auto count = static_cast<std::int64_t>(std::llround(perimeter));
    Vec2 p;
    do {
      const auto k = rng_.uniform_int(0, count - 1);
      p = perimeter_point(scenario_.airspace_min, scenario_.airspace_max,
                          static_cast<double>(k));
    } while (classify(p) == StateClass::kConflict);
    return reset_at(p);
  }

  // Deterministic start used by evaluation sweeps.
  Eigen::VectorXd reset_at(Vec2 origin) {
    pose_.position = origin;
    pose_.speed = scenario_.agent_speed;
    const Vec2 d = scenario_.goal - origin;
    pose_.heading = (d.x == 0.0 && d.y == 0.0) ? 0.0 : std::atan2(d.y, d.x);
    frame_angle_ = pose_.heading;
    steps_ = 0;
    episode_return_ = 0.0;
    done_ = false;
    started_ = true;
    outcome_ = Outcome::kOngoing;
    current_obs_ = observe();
    return current_obs_;
  }

  // action[0] = commanded heading change, radians (clamped to the envelope).
  StepResult step(const Eigen::VectorXd& action) {
    if (!started_) throw std::logic_error("step() before reset()");
    if (done_) throw std::logic_error("step() after episode end");
    if (action.size() != action_dim())
      throw std::invalid_argument("static action must have 1 component");

    pose_.heading = apply_heading_action(pose_.heading, action[0]);
    pose_.position = step_position(pose_);
    if (scenario_.uncertainty.enabled) {
      // Both draws are consumed every step so the stream layout does not
      // depend on outcomes.
      const double u = rng_.uniform();
      const double phi = rng_.uniform();
      pose_.position = perturb_position(pose_.position, scenario_.uncertainty.offset_radius,
                                        scenario_.uncertainty.probability, u, phi);
    }
    ++steps_;

    StepResult res;
    const StateClass cls = classify(pose_.position);
    res.distance_to_goal = distance_to_goal();
    res.in_conflict = cls == StateClass::kConflict;
    res.reward = reward_static(res.distance_to_goal / scenario_.reward_unit_m, cls);
    episode_return_ += res.reward;
    if (cls == StateClass::kGoal) {
      done_ = true;
      outcome_ = Outcome::kGoal;
    } else if (cls == StateClass::kConflict) {
      done_ = true;
      outcome_ = Outcome::kConflict;
    } else if (steps_ >= scenario_.timeout_steps) {
      done_ = true;
      outcome_ = Outcome::kTimeout;
    }
    res.done = done_;
    res.outcome = outcome_;
    current_obs_ = observe();
    res.observation = current_obs_;
    return res;
  }

  // Goal membership beats conflict when both hold.
  StateClass classify(Vec2 p) const {
    if (distance(p, scenario_.goal) <= scenario_.goal_radius) return StateClass::kGoal;
    for (const auto& ob : scenario_.obstacles) {
      if (distance_to_obstacle(ob, p) < scenario_.separation || obstacle_contains(ob, p)) {
        return StateClass::kConflict;
      }
    }
    return StateClass::kOngoing;
  }

  double min_obstacle_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ob : scenario_.obstacles) {
      best = std::min(best, distance_to_obstacle(ob, pose_.position));
    }
    return best;
  }

  // Robot-centric, normalized observation:
  //   [ d_g, v_x, v_y, (P_y_i, d_i) per obstacle ]
  // Distances divide by the airspace diagonal, velocity by the agent speed.
  Eigen::VectorXd observe() {
    const FrameAxis f = frame_axis();
    const double diag = scenario_.diagonal();
    const double d_g = distance_to_goal();
    const Vec2 v_world{pose_.speed * std::cos(pose_.heading),
                       pose_.speed * std::sin(pose_.heading)};
    const Vec2 v = to_robot_frame(v_world, pose_.position, f, /*is_velocity=*/true);

    Eigen::VectorXd obs(observation_dim());
    obs[0] = d_g / diag;
    obs[1] = v.x / scenario_.agent_speed;
    obs[2] = v.y / scenario_.agent_speed;
    int k = 3;
    for (const auto& ob : scenario_.obstacles) {
      const Vec2 c = obstacle_center(ob);
      const Vec2 pc = to_robot_frame(c, pose_.position, f);
      obs[k++] = pc.y / diag;
      obs[k++] = distance(pose_.position, c) / diag;
    }
    return obs;
  }

 private:
  // Agent->goal frame, cached across the degenerate agent-on-goal case.
  FrameAxis frame_axis() {
    const FrameAxis f = goal_frame_axis(pose_.position, scenario_.goal, frame_angle_);
    if (!f.degenerate) frame_angle_ = std::atan2(f.s, f.c);
    return f;
  }

  StaticScenario scenario_;
  Rng rng_;
  Pose pose_;
  double frame_angle_ = 0.0;
  int steps_ = 0;
  double episode_return_ = 0.0;
  bool started_ = false;
  bool done_ = false;
  Outcome outcome_ = Outcome::kOngoing;
  Eigen::VectorXd current_obs_;
};

}  // namespace uasguide
