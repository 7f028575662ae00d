#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "uasguide/geometry.hpp"
#include "uasguide/textio.hpp"

namespace uasguide {

// ---------------------------------------------------------------------------
// Scenario model.
//
// File convention: scenario JSON speaks meters, meters/second and degrees.
// In memory the static world keeps meters; the moving world converts to
// decameter "world units" (1 unit = world_unit_m meters), which is the scale
// its reward coefficients are calibrated for.
// ---------------------------------------------------------------------------

struct CircleObstacle {
  Vec2 center;
  double radius = 0.0;
};

struct RectObstacle {
  Vec2 min_corner;
  Vec2 max_corner;
};

using StaticObstacle = std::variant<CircleObstacle, RectObstacle>;

// Distance from a point to the obstacle boundary: negative inside a circle,
// zero inside a rectangle.
inline double distance_to_obstacle(const StaticObstacle& ob, Vec2 p) {
  if (const auto* c = std::get_if<CircleObstacle>(&ob)) {
    return distance(p, c->center) - c->radius;
  }
  const auto& r = std::get<RectObstacle>(ob);
  const double dx = std::max({r.min_corner.x - p.x, 0.0, p.x - r.max_corner.x});
  const double dy = std::max({r.min_corner.y - p.y, 0.0, p.y - r.max_corner.y});
  return std::hypot(dx, dy);
}

// Strict interior test. Needed alongside the boundary distance because a
// rectangle's interior distance is 0, which "< separation" misses when the
// separation minimum is itself 0.
inline bool obstacle_contains(const StaticObstacle& ob, Vec2 p) {
  if (const auto* c = std::get_if<CircleObstacle>(&ob)) {
    return distance(p, c->center) < c->radius;
  }
  const auto& r = std::get<RectObstacle>(ob);
  return p.x > r.min_corner.x && p.x < r.max_corner.x && p.y > r.min_corner.y &&
         p.y < r.max_corner.y;
}

// Representative point used by the observation vector (circle center or
// rectangle centroid).
inline Vec2 obstacle_center(const StaticObstacle& ob) {
  if (const auto* c = std::get_if<CircleObstacle>(&ob)) return c->center;
  const auto& r = std::get<RectObstacle>(ob);
  return {(r.min_corner.x + r.max_corner.x) * 0.5,
          (r.min_corner.y + r.max_corner.y) * 0.5};
}

struct UncertaintyModel {
  bool enabled = false;
  double offset_radius = 75.0;  // meters
  double probability = 0.1;     // chance per step of taking an offset
};

struct StaticScenario {
  std::string name;
  Vec2 airspace_min{0.0, 0.0};
  Vec2 airspace_max{4000.0, 4000.0};
  Vec2 goal{2500.0, 2500.0};
  double goal_radius = 400.0;
  double separation = 0.0;    // conflict when boundary distance < this
  double agent_speed = 20.0;  // m/s, fixed in the static task
  std::vector<StaticObstacle> obstacles;
  UncertaintyModel uncertainty;
  double reward_unit_m = 10.0;  // divisor applied to d_g inside the reward
  int timeout_steps = 1000;

  double diagonal() const { return (airspace_max - airspace_min).norm(); }

  void validate() const {
    if (airspace_max.x <= airspace_min.x || airspace_max.y <= airspace_min.y)
      throw std::invalid_argument("scenario: airspace must have positive extent");
    if (goal_radius <= 0.0) throw std::invalid_argument("scenario: goal_radius must be > 0");
    if (separation < 0.0) throw std::invalid_argument("scenario: separation must be >= 0");
    if (agent_speed <= 0.0) throw std::invalid_argument("scenario: agent_speed must be > 0");
    if (reward_unit_m <= 0.0) throw std::invalid_argument("scenario: reward_unit_m must be > 0");
    if (timeout_steps <= 0) throw std::invalid_argument("scenario: timeout_steps must be > 0");
    if (uncertainty.offset_radius < 0.0 || uncertainty.probability < 0.0 ||
        uncertainty.probability > 1.0)
      throw std::invalid_argument("scenario: invalid uncertainty model");
    for (const auto& ob : obstacles) {
      if (const auto* c = std::get_if<CircleObstacle>(&ob)) {
        if (c->radius <= 0.0)
          throw std::invalid_argument("scenario: circle radius must be > 0");
      } else {
        const auto& r = std::get<RectObstacle>(ob);
        if (r.max_corner.x <= r.min_corner.x || r.max_corner.y <= r.min_corner.y)
          throw std::invalid_argument("scenario: rectangle must have positive extent");
      }
    }
  }
};

// Closed interval; a scenario file may give either a literal (fixed) or a
// [min, max] pair.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool fixed() const { return lo == hi; }
};

struct IntruderSpec {
  Interval origin_x;  // world units
  Interval origin_y;
  Interval heading;  // radians
  double speed = 2.0;  // world units per second
};

struct ProximityCoefficients {
  double c1 = 17.0;
  double c2 = 0.1;
  double c3 = 12.0;  // world units
};

enum class ControlMode { kHeadingOnly, kHeadingAndSpeed };

struct MovingScenario {
  std::string name;
  ControlMode control_mode = ControlMode::kHeadingOnly;
  Interval agent_origin_x;  // world units
  Interval agent_origin_y;
  Vec2 goal;            // world units
  double goal_radius = 20.0;
  double separation = 15.0;
  double agent_speed = 2.0;  // units/s (initial speed; fixed in heading-only mode)
  double max_speed = 4.0;    // units/s, commanded-speed ceiling and velocity scale
  std::vector<IntruderSpec> intruders;
  double c_g = 0.007;
  double c_0 = 0.15;
  std::vector<ProximityCoefficients> proximity;  // one entry per intruder
  double conflict_penalty = 180.0;
  Vec2 bounds_min{-50.0, -50.0};  // normalization box, world units
  Vec2 bounds_max{250.0, 250.0};
  int timeout_steps = 300;
  double world_unit_m = 10.0;

  double diagonal() const { return (bounds_max - bounds_min).norm(); }

  void validate() const {
    if (bounds_max.x <= bounds_min.x || bounds_max.y <= bounds_min.y)
      throw std::invalid_argument("scenario: bounds must have positive extent");
    if (goal_radius <= 0.0) throw std::invalid_argument("scenario: goal_radius must be > 0");
    if (separation < 0.0) throw std::invalid_argument("scenario: separation must be >= 0");
    if (agent_speed <= 0.0) throw std::invalid_argument("scenario: agent_speed must be > 0");
    if (max_speed <= 0.0) throw std::invalid_argument("scenario: max_speed must be > 0");
    if (world_unit_m <= 0.0) throw std::invalid_argument("scenario: world_unit_m must be > 0");
    if (timeout_steps <= 0) throw std::invalid_argument("scenario: timeout_steps must be > 0");
    if (intruders.empty())
      throw std::invalid_argument("scenario: moving task needs at least one intruder");
    if (proximity.size() != intruders.size())
      throw std::invalid_argument(
          "scenario: proximity coefficient count must match intruder count");
    for (const auto& it : intruders) {
      if (it.origin_x.lo > it.origin_x.hi || it.origin_y.lo > it.origin_y.hi ||
          it.heading.lo > it.heading.hi)
        throw std::invalid_argument("scenario: interval lo > hi");
      if (it.speed < 0.0) throw std::invalid_argument("scenario: intruder speed must be >= 0");
    }
    if (agent_origin_x.lo > agent_origin_x.hi || agent_origin_y.lo > agent_origin_y.hi)
      throw std::invalid_argument("scenario: interval lo > hi");
    if (conflict_penalty < 0.0)
      throw std::invalid_argument("scenario: conflict_penalty must be >= 0");
  }
};

using Scenario = std::variant<StaticScenario, MovingScenario>;

inline const std::string& scenario_name(const Scenario& s) {
  return std::visit([](const auto& v) -> const std::string& { return v.name; }, s);
}

inline bool is_moving(const Scenario& s) {
  return std::holds_alternative<MovingScenario>(s);
}

// ---------------------------------------------------------------------------
// JSON (de)serialization. Strict: unknown keys and missing required keys are
// errors, "version" must equal 1.
// ---------------------------------------------------------------------------

namespace detail {

using nlohmann::json;

inline void require_keys(const json& j, const std::set<std::string>& required,
                         const std::set<std::string>& optional,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    if (!required.count(item.key()) && !optional.count(item.key()))
      throw std::invalid_argument("scenario: unknown key '" + item.key() + "' in " + where);
  }
  for (const auto& k : required) {
    if (!j.contains(k))
      throw std::invalid_argument("scenario: missing key '" + k + "' in " + where);
  }
}

inline double get_num(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number())
    throw std::invalid_argument("scenario: '" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

inline Vec2 get_vec2(const json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw std::invalid_argument("scenario: '" + key + "' in " + where +
                                " must be a [x, y] number pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

// Literal number -> fixed interval; [min, max] -> range.
inline Interval get_interval(const json& v, const std::string& key, const std::string& where) {
  if (v.is_number()) {
    const double x = v.get<double>();
    return {x, x};
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    Interval iv{v[0].get<double>(), v[1].get<double>()};
    if (iv.lo > iv.hi)
      throw std::invalid_argument("scenario: '" + key + "' in " + where + " has min > max");
    return iv;
  }
  throw std::invalid_argument("scenario: '" + key + "' in " + where +
                              " must be a number or [min, max] pair");
}

inline json interval_to_json(const Interval& iv) {
  if (iv.fixed()) return json(iv.lo);
  return json::array({iv.lo, iv.hi});
}

inline Interval scale_interval(Interval iv, double s) { return {iv.lo * s, iv.hi * s}; }

}  // namespace detail

inline StaticScenario parse_static_scenario(const nlohmann::json& j) {
  using detail::get_num;
  using detail::get_vec2;
  detail::require_keys(
      j,
      {"version", "type", "airspace_m", "goal_m", "goal_radius_m", "agent_speed_mps",
       "obstacles"},
      {"name", "separation_m", "uncertainty", "reward_unit_m", "timeout_steps"},
      "static scenario");
  StaticScenario s;
  if (j.contains("name")) s.name = j.at("name").get<std::string>();
  const auto& air = j.at("airspace_m");
  detail::require_keys(air, {"min", "max"}, {}, "airspace_m");
  s.airspace_min = get_vec2(air, "min", "airspace_m");
  s.airspace_max = get_vec2(air, "max", "airspace_m");
  s.goal = get_vec2(j, "goal_m", "static scenario");
  s.goal_radius = get_num(j, "goal_radius_m", "static scenario");
  s.separation = j.contains("separation_m") ? get_num(j, "separation_m", "static scenario") : 0.0;
  s.agent_speed = get_num(j, "agent_speed_mps", "static scenario");
  if (j.contains("reward_unit_m")) s.reward_unit_m = get_num(j, "reward_unit_m", "static scenario");
  if (j.contains("timeout_steps")) {
    s.timeout_steps = static_cast<int>(get_num(j, "timeout_steps", "static scenario"));
  }
  const auto& obs = j.at("obstacles");
  if (!obs.is_array()) throw std::invalid_argument("scenario: 'obstacles' must be an array");
  for (const auto& o : obs) {
    const std::string shape = o.contains("shape") ? o.at("shape").get<std::string>() : "";
    if (shape == "circle") {
      detail::require_keys(o, {"shape", "center_m", "radius_m"}, {}, "circle obstacle");
      s.obstacles.push_back(CircleObstacle{get_vec2(o, "center_m", "circle obstacle"),
                                           get_num(o, "radius_m", "circle obstacle")});
    } else if (shape == "rect") {
      detail::require_keys(o, {"shape", "min_m", "max_m"}, {}, "rect obstacle");
      s.obstacles.push_back(RectObstacle{get_vec2(o, "min_m", "rect obstacle"),
                                         get_vec2(o, "max_m", "rect obstacle")});
    } else {
      throw std::invalid_argument("scenario: obstacle 'shape' must be 'circle' or 'rect'");
    }
  }
  if (j.contains("uncertainty")) {
    const auto& u = j.at("uncertainty");
    detail::require_keys(u, {"enabled"}, {"offset_radius_m", "probability"}, "uncertainty");
    s.uncertainty.enabled = u.at("enabled").get<bool>();
    if (u.contains("offset_radius_m"))
      s.uncertainty.offset_radius = get_num(u, "offset_radius_m", "uncertainty");
    if (u.contains("probability"))
      s.uncertainty.probability = get_num(u, "probability", "uncertainty");
  }
  s.validate();
  return s;
}

inline MovingScenario parse_moving_scenario(const nlohmann::json& j) {
  using detail::get_interval;
  using detail::get_num;
  using detail::get_vec2;
  detail::require_keys(
      j,
      {"version", "type", "control_mode", "agent_origin_m", "goal_m", "goal_radius_m",
       "separation_m", "agent_speed_mps", "max_speed_mps", "intruders", "reward"},
      {"name", "bounds_m", "timeout_steps", "world_unit_m"}, "moving scenario");
  MovingScenario s;
  if (j.contains("name")) s.name = j.at("name").get<std::string>();
  if (j.contains("world_unit_m")) s.world_unit_m = get_num(j, "world_unit_m", "moving scenario");
  if (s.world_unit_m <= 0.0)
    throw std::invalid_argument("scenario: world_unit_m must be > 0");
  const double u = 1.0 / s.world_unit_m;  // meters -> world units

  const std::string mode = j.at("control_mode").get<std::string>();
  if (mode == "heading_only") {
    s.control_mode = ControlMode::kHeadingOnly;
  } else if (mode == "heading_and_speed") {
    s.control_mode = ControlMode::kHeadingAndSpeed;
  } else {
    throw std::invalid_argument(
        "scenario: control_mode must be 'heading_only' or 'heading_and_speed'");
  }

  const auto& ao = j.at("agent_origin_m");
  if (!ao.is_array() || ao.size() != 2)
    throw std::invalid_argument("scenario: 'agent_origin_m' must be [x, y] entries");
  s.agent_origin_x = detail::scale_interval(get_interval(ao[0], "agent_origin_m[0]", "moving scenario"), u);
  s.agent_origin_y = detail::scale_interval(get_interval(ao[1], "agent_origin_m[1]", "moving scenario"), u);
  s.goal = get_vec2(j, "goal_m", "moving scenario") * u;
  s.goal_radius = get_num(j, "goal_radius_m", "moving scenario") * u;
  s.separation = get_num(j, "separation_m", "moving scenario") * u;
  s.agent_speed = get_num(j, "agent_speed_mps", "moving scenario") * u;
  s.max_speed = get_num(j, "max_speed_mps", "moving scenario") * u;
  if (j.contains("timeout_steps"))
    s.timeout_steps = static_cast<int>(get_num(j, "timeout_steps", "moving scenario"));
  if (j.contains("bounds_m")) {
    const auto& b = j.at("bounds_m");
    detail::require_keys(b, {"min", "max"}, {}, "bounds_m");
    s.bounds_min = get_vec2(b, "min", "bounds_m") * u;
    s.bounds_max = get_vec2(b, "max", "bounds_m") * u;
  }

  const auto& intr = j.at("intruders");
  if (!intr.is_array() || intr.empty())
    throw std::invalid_argument("scenario: 'intruders' must be a non-empty array");
  for (const auto& it : intr) {
    detail::require_keys(it, {"origin_m", "heading_deg", "speed_mps"}, {}, "intruder");
    const auto& om = it.at("origin_m");
    if (!om.is_array() || om.size() != 2)
      throw std::invalid_argument("scenario: intruder 'origin_m' must be [x, y] entries");
    IntruderSpec is;
    is.origin_x = detail::scale_interval(get_interval(om[0], "origin_m[0]", "intruder"), u);
    is.origin_y = detail::scale_interval(get_interval(om[1], "origin_m[1]", "intruder"), u);
    const Interval hdeg = get_interval(it.at("heading_deg"), "heading_deg", "intruder");
    is.heading = {hdeg.lo * kPi / 180.0, hdeg.hi * kPi / 180.0};
    is.speed = get_num(it, "speed_mps", "intruder") * u;
    s.intruders.push_back(is);
  }

  const auto& rw = j.at("reward");
  detail::require_keys(rw, {"c_g", "c_0", "proximity"}, {"conflict_penalty"}, "reward");
  s.c_g = get_num(rw, "c_g", "reward");
  s.c_0 = get_num(rw, "c_0", "reward");
  if (rw.contains("conflict_penalty"))
    s.conflict_penalty = get_num(rw, "conflict_penalty", "reward");
  const auto& px = rw.at("proximity");
  if (!px.is_array()) throw std::invalid_argument("scenario: 'proximity' must be an array");
  for (const auto& p : px) {
    detail::require_keys(p, {"c1", "c2", "c3"}, {}, "proximity");
    s.proximity.push_back({get_num(p, "c1", "proximity"), get_num(p, "c2", "proximity"),
                           get_num(p, "c3", "proximity")});
  }
  s.validate();
  return s;
}

inline Scenario parse_scenario(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw std::invalid_argument("scenario: root must be a JSON object");
    if (!j.contains("version") || !j.at("version").is_number_integer() ||
        j.at("version").get<int>() != 1)
      throw std::invalid_argument("scenario: required field 'version' must be 1");
    if (!j.contains("type")) throw std::invalid_argument("scenario: missing 'type'");
    const std::string type = j.at("type").get<std::string>();
    if (type == "static") return parse_static_scenario(j);
    if (type == "moving") return parse_moving_scenario(j);
    throw std::invalid_argument("scenario: 'type' must be 'static' or 'moving'");
  } catch (const nlohmann::json::exception& e) {
    // Wrong-typed values surface as library exceptions; fold them into the
    // invalid-input contract.
    throw std::invalid_argument(std::string("scenario: ") + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("scenario: " + path + ": " + e.what());
  }
  return parse_scenario(j);
}

inline nlohmann::json scenario_to_json(const StaticScenario& s) {
  nlohmann::json j;
  j["version"] = 1;
  j["type"] = "static";
  if (!s.name.empty()) j["name"] = s.name;
  j["airspace_m"] = {{"min", {s.airspace_min.x, s.airspace_min.y}},
                     {"max", {s.airspace_max.x, s.airspace_max.y}}};
  j["goal_m"] = {s.goal.x, s.goal.y};
  j["goal_radius_m"] = s.goal_radius;
  j["separation_m"] = s.separation;
  j["agent_speed_mps"] = s.agent_speed;
  j["reward_unit_m"] = s.reward_unit_m;
  j["timeout_steps"] = s.timeout_steps;
  j["obstacles"] = nlohmann::json::array();
  for (const auto& ob : s.obstacles) {
    if (const auto* c = std::get_if<CircleObstacle>(&ob)) {
      j["obstacles"].push_back({{"shape", "circle"},
                                {"center_m", {c->center.x, c->center.y}},
                                {"radius_m", c->radius}});
    } else {
      const auto& r = std::get<RectObstacle>(ob);
      j["obstacles"].push_back({{"shape", "rect"},
                                {"min_m", {r.min_corner.x, r.min_corner.y}},
                                {"max_m", {r.max_corner.x, r.max_corner.y}}});
    }
  }
  j["uncertainty"] = {{"enabled", s.uncertainty.enabled},
                      {"offset_radius_m", s.uncertainty.offset_radius},
                      {"probability", s.uncertainty.probability}};
  return j;
}

inline nlohmann::json scenario_to_json(const MovingScenario& s) {
  using detail::interval_to_json;
  const double m = s.world_unit_m;  // world units -> meters
  nlohmann::json j;
  j["version"] = 1;
  j["type"] = "moving";
  if (!s.name.empty()) j["name"] = s.name;
  j["control_mode"] =
      s.control_mode == ControlMode::kHeadingOnly ? "heading_only" : "heading_and_speed";
  j["agent_origin_m"] = {interval_to_json(detail::scale_interval(s.agent_origin_x, m)),
                         interval_to_json(detail::scale_interval(s.agent_origin_y, m))};
  j["goal_m"] = {s.goal.x * m, s.goal.y * m};
  j["goal_radius_m"] = s.goal_radius * m;
  j["separation_m"] = s.separation * m;
  j["agent_speed_mps"] = s.agent_speed * m;
  j["max_speed_mps"] = s.max_speed * m;
  j["bounds_m"] = {{"min", {s.bounds_min.x * m, s.bounds_min.y * m}},
                   {"max", {s.bounds_max.x * m, s.bounds_max.y * m}}};
  j["timeout_steps"] = s.timeout_steps;
  j["world_unit_m"] = s.world_unit_m;
  j["intruders"] = nlohmann::json::array();
  for (const auto& it : s.intruders) {
    nlohmann::json io;
    io["origin_m"] = {interval_to_json(detail::scale_interval(it.origin_x, m)),
                      interval_to_json(detail::scale_interval(it.origin_y, m))};
    io["heading_deg"] =
        interval_to_json({it.heading.lo * 180.0 / kPi, it.heading.hi * 180.0 / kPi});
    io["speed_mps"] = it.speed * m;
    j["intruders"].push_back(io);
  }
  j["reward"] = {{"c_g", s.c_g},
                 {"c_0", s.c_0},
                 {"conflict_penalty", s.conflict_penalty},
                 {"proximity", nlohmann::json::array()}};
  for (const auto& p : s.proximity) {
    j["reward"]["proximity"].push_back({{"c1", p.c1}, {"c2", p.c2}, {"c3", p.c3}});
  }
  return j;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  return std::visit([](const auto& v) { return scenario_to_json(v); }, s);
}

// Content fingerprint over the canonical (sorted-key) JSON dump. Stored in
// checkpoints and manifests so a model is never silently evaluated against a
// different world than it was trained in.
inline std::string scenario_fingerprint(const Scenario& s) {
  return fnv1a64_hex(scenario_to_json(s).dump());
}

// ---------------------------------------------------------------------------
// Presets.
// ---------------------------------------------------------------------------

inline std::vector<std::string> preset_names() {
  return {"static-circles",      "static-rects",           "static-single-circle",
          "static-circles-uncertain", "stochastic-intruders", "deterministic-intruders"};
}

inline Scenario make_preset(const std::string& name) {
  const double kDegToRad = kPi / 180.0;
  if (name == "static-circles" || name == "static-circles-uncertain") {
    StaticScenario s;
    s.name = name;
    s.obstacles = {CircleObstacle{{1000.0, 1000.0}, 300.0},
                   CircleObstacle{{1000.0, 3000.0}, 300.0},
                   CircleObstacle{{3000.0, 1200.0}, 300.0}};
    if (name == "static-circles-uncertain") {
      s.uncertainty = {true, 75.0, 0.1};
      s.separation = 75.0;
    }
    s.validate();
    return s;
  }
  if (name == "static-rects") {
    StaticScenario s;
    s.name = name;
    const double h = 300.0;  // half side: 600 m squares
    const Vec2 centers[] = {{1000.0, 1000.0}, {1000.0, 3000.0}, {3000.0, 1200.0}};
    for (const Vec2 c : centers) {
      s.obstacles.push_back(RectObstacle{{c.x - h, c.y - h}, {c.x + h, c.y + h}});
    }
    s.validate();
    return s;
  }
  if (name == "static-single-circle") {
    StaticScenario s;
    s.name = name;
    s.obstacles = {CircleObstacle{{1500.0, 1500.0}, 300.0}};
    s.validate();
    return s;
  }
  if (name == "stochastic-intruders" || name == "deterministic-intruders") {
    MovingScenario s;
    s.name = name;
    s.goal_radius = 20.0;
    s.separation = 15.0;
    s.agent_speed = 2.0;
    s.max_speed = 4.0;
    if (name == "stochastic-intruders") {
      s.control_mode = ControlMode::kHeadingOnly;
      s.agent_origin_x = {75.0, 135.0};
      s.agent_origin_y = {0.0, 25.0};
      s.goal = {100.0, 200.0};
      s.c_g = 0.007;
      s.c_0 = 0.15;
      s.intruders = {
          IntruderSpec{{5.0, 35.0}, {200.0, 200.0}, {-90.0 * kDegToRad, 0.0}, 2.0},
          IntruderSpec{{20.0, 65.0}, {20.0, 65.0}, {0.0, 90.0 * kDegToRad}, 2.0},
          IntruderSpec{{120.0, 180.0},
                       {120.0, 180.0},
                       {-180.0 * kDegToRad, -90.0 * kDegToRad},
                       2.0}};
      s.proximity = {{17.0, 0.1, 12.0}, {17.0, 0.1, 12.0}, {17.0, 0.1, 12.0}};
    } else {
      s.control_mode = ControlMode::kHeadingAndSpeed;
      s.agent_origin_x = {100.0, 100.0};
      s.agent_origin_y = {210.0, 210.0};
      s.goal = {100.0, 0.0};
      s.c_g = 0.22;
      s.c_0 = 0.05;
      s.intruders = {
          IntruderSpec{{90.0, 90.0}, {170.0, 170.0}, {-90.0 * kDegToRad, -90.0 * kDegToRad}, 2.0},
          IntruderSpec{{35.0, 35.0}, {155.0, 155.0}, {-0.2 * kDegToRad, -0.2 * kDegToRad}, 2.0},
          IntruderSpec{{-15.0, -15.0}, {115.0, 115.0}, {-0.2 * kDegToRad, -0.2 * kDegToRad}, 2.0}};
      s.proximity = {{3.0, 0.1, 12.0}, {3.0, 0.1, 12.0}, {3.0, 0.1, 12.0}};
    }
    s.validate();
    return s;
  }
  throw std::invalid_argument("unknown preset '" + name + "' (available: static-circles, "
                              "static-rects, static-single-circle, static-circles-uncertain, "
                              "stochastic-intruders, deterministic-intruders)");
}

}  // namespace uasguide
