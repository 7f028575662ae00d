#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uasguide/eval.hpp"
#include "uasguide/scenario.hpp"
#include "uasguide/textio.hpp"

namespace uasguide {

// All plots are emitted as self-contained SVG with shortest-round-trip number
// formatting and no timestamps, so identical inputs give identical bytes.
//
// Field plots use the figure convention: 1 px = 10 m, "+" marks the goal,
// arrows show selected headings (static task), circles of radius equal to the
// speed mark successive positions (moving task).

enum class PlotStyle {
  kStaticField,     // trajectories over the obstacle map, heading arrows
  kMovingField,     // one episode with speed circles, intruders when known
  kMinDistScatter,  // per-episode minimum intruder distance
  kLearningCurve,   // reward mean vs env steps
};

namespace svg {

inline constexpr double kMetersPerPixel = 10.0;

inline std::string num(double v) { return format_double(v, 2); }

inline void line(std::string& out, double x1, double y1, double x2, double y2,
                 const std::string& style) {
  out += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
         "\" y2=\"" + num(y2) + "\" " + style + "/>\n";
}

inline void text(std::string& out, double x, double y, const std::string& s,
                 const std::string& extra = "font-size=\"10\" fill=\"#444\"") {
  out += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" " +
         extra + ">" + s + "</text>\n";
}

inline void circle(std::string& out, double cx, double cy, double r,
                   const std::string& style) {
  out += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" " +
         style + "/>\n";
}

// World-to-canvas mapping. World coordinates in meters, y up; canvas y down.
struct Canvas {
  double min_x_m = 0.0, min_y_m = 0.0, max_x_m = 0.0, max_y_m = 0.0;
  double margin = 46.0;

  double width() const { return (max_x_m - min_x_m) / kMetersPerPixel + 2 * margin; }
  double height() const { return (max_y_m - min_y_m) / kMetersPerPixel + 2 * margin; }
  double px(double x_m) const { return margin + (x_m - min_x_m) / kMetersPerPixel; }
  double py(double y_m) const {
    return height() - margin - (y_m - min_y_m) / kMetersPerPixel;
  }

  std::string open() const {
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width()) +
           "\" height=\"" + num(height()) + "\" viewBox=\"0 0 " + num(width()) + " " +
           num(height()) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(width()) + "\" height=\"" +
           num(height()) + "\" fill=\"#ffffff\"/>\n";
    return out;
  }

  // Frame plus ticks labeled in 10 m units (the figure axis convention).
  void axes(std::string& out, double tick_m) const {
    const std::string axis_style = "stroke=\"#222\" stroke-width=\"1\"";
    line(out, px(min_x_m), py(min_y_m), px(max_x_m), py(min_y_m), axis_style);
    line(out, px(min_x_m), py(min_y_m), px(min_x_m), py(max_y_m), axis_style);
    line(out, px(min_x_m), py(max_y_m), px(max_x_m), py(max_y_m), axis_style);
    line(out, px(max_x_m), py(min_y_m), px(max_x_m), py(max_y_m), axis_style);
    for (double x = min_x_m; x <= max_x_m + 1e-9; x += tick_m) {
      line(out, px(x), py(min_y_m), px(x), py(min_y_m) + 4, axis_style);
      text(out, px(x) - 8, py(min_y_m) + 16,
           format_double(x / kMetersPerPixel, 0));
    }
    for (double y = min_y_m; y <= max_y_m + 1e-9; y += tick_m) {
      line(out, px(min_x_m), py(y), px(min_x_m) - 4, py(y), axis_style);
      text(out, px(min_x_m) - 34, py(y) + 3,
           format_double(y / kMetersPerPixel, 0));
    }
    text(out, px(max_x_m) - 30, py(min_y_m) + 30, "x10 m");
  }
};

inline const char* outcome_color(const std::string& outcome) {
  if (outcome == "goal") return "#1f77b4";
  if (outcome == "conflict") return "#d62728";
  return "#7f7f7f";  // timeout / ongoing
}

inline void goal_marker(std::string& out, const Canvas& cv, Vec2 goal_m,
                        double goal_radius_m) {
  const double gx = cv.px(goal_m.x);
  const double gy = cv.py(goal_m.y);
  circle(out, gx, gy, goal_radius_m / kMetersPerPixel,
         "fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1\" stroke-dasharray=\"5 4\"");
  line(out, gx - 6, gy, gx + 6, gy, "stroke=\"#2ca02c\" stroke-width=\"2\"");
  line(out, gx, gy - 6, gx, gy + 6, "stroke=\"#2ca02c\" stroke-width=\"2\"");
}

inline void draw_static_scenario(std::string& out, const Canvas& cv,
                                 const StaticScenario& s) {
  for (const auto& ob : s.obstacles) {
    if (const auto* c = std::get_if<CircleObstacle>(&ob)) {
      circle(out, cv.px(c->center.x), cv.py(c->center.y), c->radius / kMetersPerPixel,
             "fill=\"#c8d0da\" stroke=\"#5b6472\" stroke-width=\"1\"");
    } else {
      const auto& r = std::get<RectObstacle>(ob);
      out += "<rect x=\"" + num(cv.px(r.min_corner.x)) + "\" y=\"" +
             num(cv.py(r.max_corner.y)) + "\" width=\"" +
             num((r.max_corner.x - r.min_corner.x) / kMetersPerPixel) + "\" height=\"" +
             num((r.max_corner.y - r.min_corner.y) / kMetersPerPixel) +
             "\" fill=\"#c8d0da\" stroke=\"#5b6472\" stroke-width=\"1\"/>\n";
    }
    if (s.separation > 0.0) {
      const Vec2 c = obstacle_center(ob);
      double reach = s.separation;
      if (const auto* ci = std::get_if<CircleObstacle>(&ob)) reach += ci->radius;
      circle(out, cv.px(c.x), cv.py(c.y), reach / kMetersPerPixel,
             "fill=\"none\" stroke=\"#b0651a\" stroke-width=\"0.8\" "
             "stroke-dasharray=\"4 3\"");
    }
  }
  goal_marker(out, cv, s.goal, s.goal_radius);
}

}  // namespace svg

// Trajectories over the static obstacle field, one polyline per episode,
// heading arrows every `arrow_interval` steps.
inline std::string render_static_field(const std::vector<ReportRow>& report,
                                       const std::vector<TrajectoryRow>& trajectories,
                                       const std::optional<StaticScenario>& scenario,
                                       int arrow_interval = 15) {
  svg::Canvas cv;
  if (scenario) {
    cv.min_x_m = scenario->airspace_min.x;
    cv.min_y_m = scenario->airspace_min.y;
    cv.max_x_m = scenario->airspace_max.x;
    cv.max_y_m = scenario->airspace_max.y;
  } else {
    cv.min_x_m = 0.0;
    cv.min_y_m = 0.0;
    cv.max_x_m = 4000.0;
    cv.max_y_m = 4000.0;
  }
  std::string out = cv.open();
  cv.axes(out, 500.0);
  if (scenario) svg::draw_static_scenario(out, cv, *scenario);

  std::map<int, std::string> outcome_by_id;
  for (const auto& r : report) outcome_by_id[r.episode_id] = r.outcome;

  // Group trajectory rows by episode (rows arrive sorted by episode, t).
  std::size_t i = 0;
  while (i < trajectories.size()) {
    const int id = trajectories[i].episode_id;
    std::string points;
    std::size_t begin = i;
    while (i < trajectories.size() && trajectories[i].episode_id == id) {
      points += svg::num(cv.px(trajectories[i].position_m.x)) + "," +
                svg::num(cv.py(trajectories[i].position_m.y)) + " ";
      ++i;
    }
    const auto it = outcome_by_id.find(id);
    const char* color =
        svg::outcome_color(it == outcome_by_id.end() ? "timeout" : it->second);
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1\" points=\"" + points + "\"/>\n";
    for (std::size_t k = begin; k < i; k += static_cast<std::size_t>(arrow_interval)) {
      const auto& row = trajectories[k];
      const double hx = cv.px(row.position_m.x);
      const double hy = cv.py(row.position_m.y);
      const double a = row.heading_deg * kPi / 180.0;
      // Canvas y is flipped, so the arrow's dy negates the world direction.
      const double tipx = hx + 9.0 * std::cos(a);
      const double tipy = hy - 9.0 * std::sin(a);
      svg::line(out, hx, hy, tipx, tipy,
                "stroke=\"" + std::string(color) + "\" stroke-width=\"0.8\"");
      const double wing = a + kPi * 0.85;
      const double wing2 = a - kPi * 0.85;
      svg::line(out, tipx, tipy, tipx + 3.0 * std::cos(wing), tipy - 3.0 * std::sin(wing),
                "stroke=\"" + std::string(color) + "\" stroke-width=\"0.8\"");
      svg::line(out, tipx, tipy, tipx + 3.0 * std::cos(wing2),
                tipy - 3.0 * std::sin(wing2),
                "stroke=\"" + std::string(color) + "\" stroke-width=\"0.8\"");
    }
  }
  out += "</svg>\n";
  return out;
}

// One moving-task episode: agent positions as circles whose radius equals the
// current speed (units = px), every `circle_interval` steps with step labels
// every `label_interval`. Intruder traces are reconstructed from the scenario
// when every intruder spec is fixed (deterministic layouts).
inline std::string render_moving_field(const std::vector<TrajectoryRow>& trajectory,
                                       const std::optional<MovingScenario>& scenario,
                                       int circle_interval = 5, int label_interval = 10) {
  svg::Canvas cv;
  double unit_m = scenario ? scenario->world_unit_m : 10.0;
  if (scenario) {
    cv.min_x_m = scenario->bounds_min.x * unit_m;
    cv.min_y_m = scenario->bounds_min.y * unit_m;
    cv.max_x_m = scenario->bounds_max.x * unit_m;
    cv.max_y_m = scenario->bounds_max.y * unit_m;
  } else {
    cv.min_x_m = -500.0;
    cv.min_y_m = -500.0;
    cv.max_x_m = 2500.0;
    cv.max_y_m = 2500.0;
  }
  std::string out = cv.open();
  cv.axes(out, 500.0);
  if (scenario) {
    svg::goal_marker(out, cv, scenario->goal * unit_m, scenario->goal_radius * unit_m);
  }

  const int max_t = trajectory.empty() ? 0 : trajectory.back().t;
  if (scenario) {
    bool all_fixed = true;
    for (const auto& sp : scenario->intruders) {
      all_fixed = all_fixed && sp.origin_x.fixed() && sp.origin_y.fixed() &&
                  sp.heading.fixed();
    }
    if (all_fixed) {
      const char* palette[] = {"#9467bd", "#8c564b", "#e377c2", "#bcbd22"};
      for (std::size_t k = 0; k < scenario->intruders.size(); ++k) {
        const auto& sp = scenario->intruders[k];
        const Vec2 v{sp.speed * std::cos(sp.heading.lo),
                     sp.speed * std::sin(sp.heading.lo)};
        const Vec2 o{sp.origin_x.lo, sp.origin_y.lo};
        const char* color = palette[k % 4];
        for (int t = 0; t <= max_t; t += circle_interval) {
          const Vec2 p = o + v * static_cast<double>(t);
          svg::circle(out, cv.px(p.x * unit_m), cv.py(p.y * unit_m),
                      sp.speed * unit_m / svg::kMetersPerPixel,
                      "fill=\"none\" stroke=\"" + std::string(color) +
                          "\" stroke-width=\"0.9\"");
          if (t % label_interval == 0) {
            svg::text(out, cv.px(p.x * unit_m) + 3, cv.py(p.y * unit_m) - 3,
                      std::to_string(t), "font-size=\"7\" fill=\"" +
                          std::string(color) + "\"");
          }
        }
      }
    }
  }

  for (const auto& row : trajectory) {
    if (row.t % circle_interval != 0) continue;
    const double radius_px = row.speed_mps * kTimeStep / svg::kMetersPerPixel;
    svg::circle(out, cv.px(row.position_m.x), cv.py(row.position_m.y),
                std::max(radius_px, 0.6),
                "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\"");
    if (row.t % label_interval == 0) {
      svg::text(out, cv.px(row.position_m.x) + 3, cv.py(row.position_m.y) - 3,
                std::to_string(row.t), "font-size=\"7\" fill=\"#1f77b4\"");
    }
  }
  out += "</svg>\n";
  return out;
}

// Per-episode minimum intruder distance, with the separation threshold line.
inline std::string render_min_distance_scatter(const std::vector<ReportRow>& report,
                                               double separation_m = 150.0) {
  const double plot_w = 640.0;
  const double plot_h = 360.0;
  const double margin = 50.0;
  double max_d = separation_m * 2.0;
  for (const auto& r : report) {
    if (!std::isnan(r.min_distance_m)) max_d = std::max(max_d, r.min_distance_m);
  }
  const int n = std::max<std::size_t>(report.size(), 1);
  const auto sx = [&](double i) { return margin + i / n * plot_w; };
  const auto sy = [&](double d) { return margin + plot_h - d / max_d * plot_h; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         svg::num(plot_w + 2 * margin) + "\" height=\"" + svg::num(plot_h + 2 * margin) +
         "\" viewBox=\"0 0 " + svg::num(plot_w + 2 * margin) + " " +
         svg::num(plot_h + 2 * margin) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + svg::num(plot_w + 2 * margin) +
         "\" height=\"" + svg::num(plot_h + 2 * margin) + "\" fill=\"#ffffff\"/>\n";
  svg::line(out, margin, margin + plot_h, margin + plot_w, margin + plot_h,
            "stroke=\"#222\" stroke-width=\"1\"");
  svg::line(out, margin, margin, margin, margin + plot_h,
            "stroke=\"#222\" stroke-width=\"1\"");
  svg::text(out, margin + plot_w / 2 - 30, margin + plot_h + 30, "episode");
  svg::text(out, 4, margin - 8, "min distance, m");
  for (int d = 0; d <= static_cast<int>(max_d); d += 100) {
    svg::line(out, margin - 4, sy(d), margin, sy(d), "stroke=\"#222\" stroke-width=\"1\"");
    svg::text(out, margin - 36, sy(d) + 3, std::to_string(d));
  }
  svg::line(out, margin, sy(separation_m), margin + plot_w, sy(separation_m),
            "stroke=\"#ff7f0e\" stroke-width=\"1.5\"");
  svg::text(out, margin + plot_w - 120, sy(separation_m) - 5,
            "separation " + format_double(separation_m, 0) + " m",
            "font-size=\"10\" fill=\"#ff7f0e\"");
  for (std::size_t i = 0; i < report.size(); ++i) {
    if (std::isnan(report[i].min_distance_m)) continue;
    svg::circle(out, sx(static_cast<double>(i)), sy(report[i].min_distance_m), 1.6,
                "fill=\"#1f77b4\" stroke=\"none\"");
  }
  out += "</svg>\n";
  return out;
}

// Episode-reward learning curve vs environment steps.
inline std::string render_learning_curve(const std::vector<CurveRow>& rows) {
  const double plot_w = 640.0;
  const double plot_h = 360.0;
  const double margin = 60.0;
  double min_r = 0.0, max_r = 1.0;
  long long max_steps = 1;
  bool any = false;
  for (const auto& r : rows) {
    if (std::isnan(r.episode_reward_mean)) continue;
    if (!any) {
      min_r = max_r = r.episode_reward_mean;
      any = true;
    } else {
      min_r = std::min(min_r, r.episode_reward_mean);
      max_r = std::max(max_r, r.episode_reward_mean);
    }
  }
  for (const auto& r : rows) max_steps = std::max(max_steps, r.env_steps);
  if (!any) {
    min_r = 0.0;
    max_r = 1.0;
  }
  if (max_r - min_r < 1e-12) max_r = min_r + 1.0;
  const auto sx = [&](double s) { return margin + s / static_cast<double>(max_steps) * plot_w; };
  const auto sy = [&](double v) {
    return margin + plot_h - (v - min_r) / (max_r - min_r) * plot_h;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         svg::num(plot_w + 2 * margin) + "\" height=\"" + svg::num(plot_h + 2 * margin) +
         "\" viewBox=\"0 0 " + svg::num(plot_w + 2 * margin) + " " +
         svg::num(plot_h + 2 * margin) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + svg::num(plot_w + 2 * margin) +
         "\" height=\"" + svg::num(plot_h + 2 * margin) + "\" fill=\"#ffffff\"/>\n";
  svg::line(out, margin, margin + plot_h, margin + plot_w, margin + plot_h,
            "stroke=\"#222\" stroke-width=\"1\"");
  svg::line(out, margin, margin, margin, margin + plot_h,
            "stroke=\"#222\" stroke-width=\"1\"");
  svg::text(out, margin + plot_w / 2 - 40, margin + plot_h + 32, "env steps");
  svg::text(out, 4, margin - 10, "episode reward (mean of last 100)");
  svg::text(out, margin - 8, margin + plot_h + 14, "0");
  svg::text(out, margin + plot_w - 30, margin + plot_h + 14,
            format_double(static_cast<double>(max_steps)));
  svg::text(out, 4, sy(min_r) + 3, format_double(min_r, 1));
  svg::text(out, 4, sy(max_r) + 3, format_double(max_r, 1));

  std::string points;
  for (const auto& r : rows) {
    if (std::isnan(r.episode_reward_mean)) continue;
    points += svg::num(sx(static_cast<double>(r.env_steps))) + "," +
              svg::num(sy(r.episode_reward_mean)) + " ";
  }
  if (!points.empty()) {
    out += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"" +
           points + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace uasguide
