#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "uasguide/env_static.hpp"  // Outcome, StepResult, StateClass
#include "uasguide/geometry.hpp"
#include "uasguide/rng.hpp"
#include "uasguide/scenario.hpp"

namespace uasguide {

// Smooth closeness penalty: c1 * (arctan(c2 * (d - c3)) - pi/2).
// Zero-ish far away, approaching -c1*pi as the intruder closes in.
inline double proximity_penalty(double d, const ProximityCoefficients& c) {
  return c.c1 * (std::atan(c.c2 * (d - c.c3)) - kPi / 2.0);
}

// Reward for the moving-intruder task, all distances in world units:
//   goal:    +1000 (terminal)
//   else:    -c_g*d_g - c_0 + sum_i proximity_penalty(d_i)  [- penalty if in
//            conflict; conflict does not terminate the episode]
inline double reward_moving(double d_g, const std::vector<double>& intruder_distances,
                            StateClass cls, const MovingScenario& s) {
  if (cls == StateClass::kGoal) return 1000.0;
  double r = -s.c_g * d_g - s.c_0;
  for (std::size_t i = 0; i < intruder_distances.size(); ++i) {
    r += proximity_penalty(intruder_distances[i], s.proximity[i]);
  }
  if (cls == StateClass::kConflict) r -= s.conflict_penalty;
  return r;
}

class MovingEnv {
 public:
  using ScenarioType = MovingScenario;

  MovingEnv(MovingScenario scenario, std::uint64_t seed)
      : scenario_(std::move(scenario)), rng_(seed) {
    scenario_.validate();
  }

  int observation_dim() const {
    return 5 + 7 * static_cast<int>(scenario_.intruders.size());
  }
  int action_dim() const {
    return scenario_.control_mode == ControlMode::kHeadingAndSpeed ? 2 : 1;
  }

  const MovingScenario& scenario() const { return scenario_; }
  const Pose& pose() const { return pose_; }
  bool started() const { return started_; }
  bool done() const { return done_; }
  Outcome outcome() const { return outcome_; }
  int steps() const { return steps_; }
  double episode_return() const { return episode_return_; }
  double distance_to_goal() const { return distance(pose_.position, scenario_.goal); }
  const Eigen::VectorXd& current_observation() const { return current_obs_; }

  struct IntruderState {
    Vec2 position;
    Vec2 velocity;
  };
  const std::vector<IntruderState>& intruders() const { return intruders_; }

  double min_intruder_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& it : intruders_) {
      best = std::min(best, distance(pose_.position, it.position));
    }
    return best;
  }

  Eigen::VectorXd reset() {
    pose_.position = {sample(scenario_.agent_origin_x), sample(scenario_.agent_origin_y)};
    pose_.speed = scenario_.agent_speed;
    const Vec2 d = scenario_.goal - pose_.position;
    pose_.heading = (d.x == 0.0 && d.y == 0.0) ? 0.0 : std::atan2(d.y, d.x);
    frame_angle_ = pose_.heading;
    intruders_.clear();
    for (const auto& spec : scenario_.intruders) {
      IntruderState st;
      st.position = {sample(spec.origin_x), sample(spec.origin_y)};
      const double h = sample(spec.heading);
      st.velocity = {spec.speed * std::cos(h), spec.speed * std::sin(h)};
      intruders_.push_back(st);
    }
    steps_ = 0;
    episode_return_ = 0.0;
    done_ = false;
    started_ = true;
    outcome_ = Outcome::kOngoing;
    current_obs_ = observe();
    return current_obs_;
  }

  // action[0] = heading change (radians); action[1] (heading+speed mode only)
  // = commanded speed in meter-equivalents/s, clamped to [0, max_speed].
  StepResult step(const Eigen::VectorXd& action) {
    if (!started_) throw std::logic_error("step() before reset()");
    if (done_) throw std::logic_error("step() after episode end");
    if (action.size() != action_dim())
      throw std::invalid_argument("moving action has wrong dimension");

    pose_.heading = apply_heading_action(pose_.heading, action[0]);
    if (scenario_.control_mode == ControlMode::kHeadingAndSpeed) {
      const double v_units = action[1] / scenario_.world_unit_m;
      pose_.speed = std::clamp(v_units, 0.0, scenario_.max_speed);
    }
    pose_.position = step_position(pose_);
    for (auto& it : intruders_) {
      it.position += it.velocity * kTimeStep;
    }
    ++steps_;

    std::vector<double> dists(intruders_.size());
    for (std::size_t i = 0; i < intruders_.size(); ++i) {
      dists[i] = distance(pose_.position, intruders_[i].position);
    }
    const double d_g = distance_to_goal();
    const bool at_goal = d_g <= scenario_.goal_radius;
    const bool conflicted =
        *std::min_element(dists.begin(), dists.end()) < scenario_.separation;
    const StateClass cls = at_goal ? StateClass::kGoal
                          : conflicted ? StateClass::kConflict
                                       : StateClass::kOngoing;

    StepResult res;
    res.distance_to_goal = d_g;
    res.min_intruder_distance = *std::min_element(dists.begin(), dists.end());
    res.in_conflict = cls == StateClass::kConflict;
    res.reward = reward_moving(d_g, dists, cls, scenario_);
    episode_return_ += res.reward;
    if (at_goal) {
      done_ = true;
      outcome_ = Outcome::kGoal;
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

  // Robot-centric, normalized observation:
  //   [ d_g, v_x, v_y, g_x, g_y,
  //     (P_x, P_y, V_x, V_y, d_i, Vref_x, Vref_y) per intruder ]
  // Positions/distances divide by the normalization-box diagonal, velocities
  // by the commanded-speed ceiling. Vref is the agent velocity relative to the
  // intruder, rotated into the frame.
  Eigen::VectorXd observe() {
    const FrameAxis f = frame_axis();
    const double diag = scenario_.diagonal();
    const double vs = scenario_.max_speed;
    const Vec2 v_world{pose_.speed * std::cos(pose_.heading),
                       pose_.speed * std::sin(pose_.heading)};
    const Vec2 v = to_robot_frame(v_world, pose_.position, f, /*is_velocity=*/true);
    const Vec2 g = to_robot_frame(scenario_.goal, pose_.position, f);

    Eigen::VectorXd obs(observation_dim());
    obs[0] = distance_to_goal() / diag;
    obs[1] = v.x / vs;
    obs[2] = v.y / vs;
    obs[3] = g.x / diag;
    obs[4] = g.y / diag;
    int k = 5;
    for (const auto& it : intruders_) {
      const Vec2 p = to_robot_frame(it.position, pose_.position, f);
      const Vec2 vi = to_robot_frame(it.velocity, pose_.position, f, /*is_velocity=*/true);
      const Vec2 vref = to_robot_frame(v_world - it.velocity, pose_.position, f,
                                       /*is_velocity=*/true);
      obs[k++] = p.x / diag;
      obs[k++] = p.y / diag;
      obs[k++] = vi.x / vs;
      obs[k++] = vi.y / vs;
      obs[k++] = distance(pose_.position, it.position) / diag;
      obs[k++] = vref.x / vs;
      obs[k++] = vref.y / vs;
    }
    return obs;
  }

 private:
  double sample(const Interval& iv) {
    return iv.fixed() ? iv.lo : rng_.uniform(iv.lo, iv.hi);
  }

  FrameAxis frame_axis() {
    const FrameAxis f = goal_frame_axis(pose_.position, scenario_.goal, frame_angle_);
    if (!f.degenerate) frame_angle_ = std::atan2(f.s, f.c);
    return f;
  }

  MovingScenario scenario_;
  Rng rng_;
  Pose pose_;
  std::vector<IntruderState> intruders_;
  double frame_angle_ = 0.0;
  int steps_ = 0;
  double episode_return_ = 0.0;
  bool started_ = false;
  bool done_ = false;
  Outcome outcome_ = Outcome::kOngoing;
  Eigen::VectorXd current_obs_;
};

}  // namespace uasguide
