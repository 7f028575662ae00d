#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "uasguide/env_moving.hpp"
#include "uasguide/env_static.hpp"
#include "uasguide/policy.hpp"
#include "uasguide/textio.hpp"

namespace uasguide {

// Mean-action (deterministic) policy for evaluation.
class MeanPolicy {
 public:
  MeanPolicy(const ActorCritic& params, const ActionSpace& space)
      : params_(&params), space_(&space) {}

  Eigen::VectorXd operator()(const Eigen::VectorXd& obs) const {
    return space_->to_physical(params_->actor.forward(obs));
  }

 private:
  const ActorCritic* params_;
  const ActionSpace* space_;
};

// Keeps the initial goal-pointing heading and (where commanded) the initial
// speed: the do-nothing baseline.
class StraightPolicy {
 public:
  StraightPolicy(const ActionSpace& space, double cruise_speed) : dim_(space.dim()) {
    action_ = Eigen::VectorXd::Zero(dim_);
    if (dim_ > 1) action_[1] = cruise_speed;
  }

  Eigen::VectorXd operator()(const Eigen::VectorXd&) const { return action_; }

 private:
  int dim_;
  Eigen::VectorXd action_;
};

struct TrajectoryPoint {
  int t = 0;
  Vec2 position;     // world units of the environment
  double heading = 0.0;  // radians
  double speed = 0.0;    // world units per second
};

struct EpisodeRecord {
  int episode_id = 0;
  Vec2 origin;  // world units
  Outcome outcome = Outcome::kOngoing;
  int steps = 0;
  bool any_conflict = false;
  // Minimum over the whole episode including the initial state; NaN for the
  // static task (no intruders).
  double min_intruder_distance = std::numeric_limits<double>::quiet_NaN();
  std::vector<TrajectoryPoint> trajectory;
};

struct EvalReport {
  bool moving = false;
  double world_unit_m = 1.0;  // multiply recorded coordinates by this for meters
  double separation = 0.0;    // world units
  std::vector<EpisodeRecord> episodes;

  int successes() const {
    int n = 0;
    for (const auto& e : episodes) n += e.outcome == Outcome::kGoal ? 1 : 0;
    return n;
  }
  double success_rate() const {
    return episodes.empty() ? 0.0
                            : static_cast<double>(successes()) /
                                  static_cast<double>(episodes.size());
  }
};

// Evenly spaced points along the airspace boundary, walked clockwise from the
// lower-left corner; each corner appears exactly once.
inline std::vector<Vec2> boundary_origins(Vec2 lo, Vec2 hi, double spacing) {
  const double lx = hi.x - lo.x;
  const double ly = hi.y - lo.y;
  if (lx <= 0.0 || ly <= 0.0) throw std::invalid_argument("boundary_origins: empty box");
  if (spacing <= 0.0) throw std::invalid_argument("boundary_origins: spacing must be > 0");
  const double nx = lx / spacing;
  const double ny = ly / spacing;
  if (std::abs(nx - std::round(nx)) > 1e-9 || std::abs(ny - std::round(ny)) > 1e-9)
    throw std::invalid_argument("boundary_origins: spacing must divide both edge lengths");
  const auto kx = static_cast<int>(std::llround(nx));
  const auto ky = static_cast<int>(std::llround(ny));
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(2 * (kx + ky)));
  for (int k = 0; k < ky; ++k) pts.push_back({lo.x, lo.y + k * spacing});
  for (int k = 0; k < kx; ++k) pts.push_back({lo.x + k * spacing, hi.y});
  for (int k = 0; k < ky; ++k) pts.push_back({hi.x, hi.y - k * spacing});
  for (int k = 0; k < kx; ++k) pts.push_back({hi.x - k * spacing, lo.y});
  return pts;
}

namespace detail {

inline double env_min_intruder_distance(const StaticEnv&) {
  return std::numeric_limits<double>::quiet_NaN();
}
inline double env_min_intruder_distance(const MovingEnv& env) {
  return env.min_intruder_distance();
}

}  // namespace detail

// Rolls one episode to termination under `policy`. The environment must have
// been reset by the caller; the t = 0 row records the initial state.
template <typename EnvT, typename PolicyT>
EpisodeRecord run_episode(EnvT& env, const PolicyT& policy, int episode_id) {
  if (!env.started() || env.done() || env.steps() != 0)
    throw std::logic_error("run_episode: environment must be freshly reset");
  EpisodeRecord rec;
  rec.episode_id = episode_id;
  rec.origin = env.pose().position;
  rec.trajectory.push_back(
      {0, env.pose().position, env.pose().heading, env.pose().speed});
  double min_d = detail::env_min_intruder_distance(env);
  while (!env.done()) {
    const StepResult res = env.step(policy(env.current_observation()));
    rec.trajectory.push_back(
        {env.steps(), env.pose().position, env.pose().heading, env.pose().speed});
    rec.any_conflict = rec.any_conflict || res.in_conflict;
    if (!std::isnan(res.min_intruder_distance)) {
      min_d = std::isnan(min_d) ? res.min_intruder_distance
                                : std::min(min_d, res.min_intruder_distance);
    }
  }
  rec.outcome = env.outcome();
  rec.steps = env.steps();
  rec.min_intruder_distance = min_d;
  return rec;
}

// Static sweep: one episode from every boundary origin (100 m spacing by
// default gives 160 origins on the 4 km square). Uncertainty draws, when the
// scenario has them, come from derive(eval_seed, origin index).
template <typename PolicyT>
EvalReport evaluate_static(const StaticScenario& scenario, const PolicyT& policy,
                           double spacing, std::uint64_t eval_seed) {
  EvalReport report;
  report.moving = false;
  report.world_unit_m = 1.0;  // static world already in meters
  report.separation = scenario.separation;
  const auto origins =
      boundary_origins(scenario.airspace_min, scenario.airspace_max, spacing);
  int id = 0;
  for (const Vec2 origin : origins) {
    StaticEnv env(scenario, Rng::derive(eval_seed, static_cast<std::uint64_t>(id)));
    env.reset_at(origin);
    report.episodes.push_back(run_episode(env, policy, id));
    ++id;
  }
  return report;
}

// Moving sweep: `episodes` random-origin episodes, env i seeded with
// derive(eval_seed, i) so the sweep is reproducible episode-by-episode.
template <typename PolicyT>
EvalReport evaluate_moving(const MovingScenario& scenario, const PolicyT& policy,
                           int episodes, std::uint64_t eval_seed) {
  if (episodes <= 0) throw std::invalid_argument("evaluate_moving: episodes must be > 0");
  EvalReport report;
  report.moving = true;
  report.world_unit_m = scenario.world_unit_m;
  report.separation = scenario.separation;
  for (int i = 0; i < episodes; ++i) {
    MovingEnv env(scenario, Rng::derive(eval_seed, static_cast<std::uint64_t>(i)));
    env.reset();
    report.episodes.push_back(run_episode(env, policy, i));
  }
  return report;
}

// ---------------------------------------------------------------------------
// CSV serialization. Coordinates and distances leave in meters.
// ---------------------------------------------------------------------------

inline constexpr const char* kReportHeader =
    "episode_id,origin_x_m,origin_y_m,outcome,steps,min_distance_m";
inline constexpr const char* kTrajectoryHeader =
    "episode_id,t,x_m,y_m,heading_deg,speed_mps";
inline constexpr const char* kCurveHeader =
    "env_steps,episodes,episode_reward_mean,episode_length_mean,clip_fraction,"
    "actor_loss,critic_loss";

inline std::string report_to_csv(const EvalReport& r) {
  std::string out(kReportHeader);
  out += '\n';
  const double m = r.world_unit_m;
  for (const auto& e : r.episodes) {
    out += std::to_string(e.episode_id);
    out += ',';
    out += format_double(e.origin.x * m);
    out += ',';
    out += format_double(e.origin.y * m);
    out += ',';
    out += outcome_name(e.outcome);
    out += ',';
    out += std::to_string(e.steps);
    out += ',';
    out += std::isnan(e.min_intruder_distance)
               ? ""
               : format_double(e.min_intruder_distance * m);
    out += '\n';
  }
  return out;
}

inline std::string trajectories_to_csv(const EvalReport& r) {
  std::string out(kTrajectoryHeader);
  out += '\n';
  const double m = r.world_unit_m;
  for (const auto& e : r.episodes) {
    for (const auto& p : e.trajectory) {
      out += std::to_string(e.episode_id);
      out += ',';
      out += std::to_string(p.t);
      out += ',';
      out += format_double(p.position.x * m);
      out += ',';
      out += format_double(p.position.y * m);
      out += ',';
      out += format_double(p.heading * 180.0 / kPi);
      out += ',';
      out += format_double(p.speed * m);
      out += '\n';
    }
  }
  return out;
}

// Parsed-back forms used by the plotting tool.

struct ReportRow {
  int episode_id = 0;
  Vec2 origin_m;
  std::string outcome;
  int steps = 0;
  double min_distance_m = std::numeric_limits<double>::quiet_NaN();
};

struct TrajectoryRow {
  int episode_id = 0;
  int t = 0;
  Vec2 position_m;
  double heading_deg = 0.0;
  double speed_mps = 0.0;
};

namespace detail {

inline std::vector<std::string_view> csv_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline void check_header(std::string_view got, std::string_view want,
                         const std::string& what) {
  if (got != want)
    throw std::invalid_argument(what + ": line 1: expected header '" +
                                std::string(want) + "'");
}

}  // namespace detail

inline std::vector<ReportRow> parse_report_csv(std::string_view text) {
  const auto lines = detail::csv_lines(text);
  if (lines.empty()) throw std::invalid_argument("report CSV: empty file");
  detail::check_header(lines[0], kReportHeader, "report CSV");
  std::vector<ReportRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = "report CSV: line " + std::to_string(i + 1);
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 6) throw std::invalid_argument(where + ": expected 6 fields");
    ReportRow r;
    r.episode_id = static_cast<int>(parse_int(f[0], where));
    r.origin_m = {parse_double(f[1], where), parse_double(f[2], where)};
    r.outcome = std::string(f[3]);
    if (r.outcome != "goal" && r.outcome != "conflict" && r.outcome != "timeout" &&
        r.outcome != "ongoing")
      throw std::invalid_argument(where + ": unknown outcome '" + r.outcome + "'");
    r.steps = static_cast<int>(parse_int(f[4], where));
    if (!f[5].empty()) r.min_distance_m = parse_double(f[5], where);
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<TrajectoryRow> parse_trajectories_csv(std::string_view text) {
  const auto lines = detail::csv_lines(text);
  if (lines.empty()) throw std::invalid_argument("trajectory CSV: empty file");
  detail::check_header(lines[0], kTrajectoryHeader, "trajectory CSV");
  std::vector<TrajectoryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = "trajectory CSV: line " + std::to_string(i + 1);
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 6) throw std::invalid_argument(where + ": expected 6 fields");
    TrajectoryRow r;
    r.episode_id = static_cast<int>(parse_int(f[0], where));
    r.t = static_cast<int>(parse_int(f[1], where));
    r.position_m = {parse_double(f[2], where), parse_double(f[3], where)};
    r.heading_deg = parse_double(f[4], where);
    r.speed_mps = parse_double(f[5], where);
    rows.push_back(r);
  }
  return rows;
}

struct CurveRow {
  long long env_steps = 0;
  long long episodes = 0;
  double episode_reward_mean = 0.0;
  double episode_length_mean = 0.0;
  double clip_fraction = 0.0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
};

inline std::vector<CurveRow> parse_curve_csv(std::string_view text) {
  const auto lines = detail::csv_lines(text);
  if (lines.empty()) throw std::invalid_argument("curve CSV: empty file");
  detail::check_header(lines[0], kCurveHeader, "curve CSV");
  std::vector<CurveRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = "curve CSV: line " + std::to_string(i + 1);
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 7) throw std::invalid_argument(where + ": expected 7 fields");
    CurveRow r;
    r.env_steps = parse_int(f[0], where);
    r.episodes = parse_int(f[1], where);
    r.episode_reward_mean = f[2] == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                          : parse_double(f[2], where);
    r.episode_length_mean = f[3] == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                          : parse_double(f[3], where);
    r.clip_fraction = parse_double(f[4], where);
    r.actor_loss = parse_double(f[5], where);
    r.critic_loss = parse_double(f[6], where);
    rows.push_back(r);
  }
  return rows;
}

inline std::string curve_record_to_csv_row(long long env_steps, long long episodes,
                                           double reward_mean, double length_mean,
                                           double clip_fraction, double actor_loss,
                                           double critic_loss) {
  std::string out;
  out += std::to_string(env_steps);
  out += ',';
  out += std::to_string(episodes);
  out += ',';
  out += std::isnan(reward_mean) ? "nan" : format_double(reward_mean);
  out += ',';
  out += std::isnan(length_mean) ? "nan" : format_double(length_mean);
  out += ',';
  out += format_double(clip_fraction);
  out += ',';
  out += format_double(actor_loss);
  out += ',';
  out += format_double(critic_loss);
  out += '\n';
  return out;
}

}  // namespace uasguide
