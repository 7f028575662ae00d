#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "test_util.hpp"
#include "uasguide/eval.hpp"
#include "uasguide/geometry.hpp"
#include "uasguide/policy.hpp"
#include "uasguide/rng.hpp"
#include "uasguide/scenario.hpp"

namespace {

using uasguide::ActorCritic;
using uasguide::boundary_origins;
using uasguide::EvalReport;
using uasguide::EpisodeRecord;
using uasguide::evaluate_moving;
using uasguide::evaluate_static;
using uasguide::kPi;
using uasguide::MeanPolicy;
using uasguide::Mlp;
using uasguide::MovingEnv;
using uasguide::MovingScenario;
using uasguide::Outcome;
using uasguide::Rng;
using uasguide::run_episode;
using uasguide::StaticEnv;
using uasguide::StaticScenario;
using uasguide::StraightPolicy;
using uasguide::Vec2;

// ---------------------------------------------------------------------------
// Boundary origin grid.
// ---------------------------------------------------------------------------

TEST(BoundaryOrigins, DefaultAirspaceGives160DistinctPoints) {
  const auto pts = boundary_origins({0.0, 0.0}, {4000.0, 4000.0}, 100.0);
  ASSERT_EQ(pts.size(), 160u);

  std::set<std::pair<double, double>> unique;
  for (const Vec2 p : pts) {
    const bool on_boundary =
        p.x == 0.0 || p.x == 4000.0 || p.y == 0.0 || p.y == 4000.0;
    EXPECT_TRUE(on_boundary) << "(" << p.x << ", " << p.y << ")";
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 4000.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LE(p.y, 4000.0);
    unique.emplace(p.x, p.y);
  }
  EXPECT_EQ(unique.size(), 160u);

  // Clockwise walk from the lower-left corner, corners appearing exactly once.
  EXPECT_EQ(pts[0].x, 0.0);
  EXPECT_EQ(pts[0].y, 0.0);
  EXPECT_EQ(pts[1].y, 100.0);
  EXPECT_EQ(pts[39].y, 3900.0);
  EXPECT_EQ(pts[40].x, 0.0);
  EXPECT_EQ(pts[40].y, 4000.0);
  EXPECT_EQ(pts[41].x, 100.0);
  EXPECT_EQ(pts[80].x, 4000.0);
  EXPECT_EQ(pts[80].y, 4000.0);
  EXPECT_EQ(pts[81].y, 3900.0);
  EXPECT_EQ(pts[120].x, 4000.0);
  EXPECT_EQ(pts[120].y, 0.0);
  EXPECT_EQ(pts[121].x, 3900.0);
  EXPECT_EQ(pts[159].x, 100.0);
  EXPECT_EQ(pts[159].y, 0.0);
}

TEST(BoundaryOrigins, RectangularBoxAndCoarseSpacing) {
  const auto rect = boundary_origins({0.0, 0.0}, {4000.0, 2000.0}, 100.0);
  EXPECT_EQ(rect.size(), 120u);  // 2 * (40 + 20)

  const auto coarse = boundary_origins({0.0, 0.0}, {4000.0, 4000.0}, 500.0);
  EXPECT_EQ(coarse.size(), 32u);

  // Spacing equal to the edge length leaves only the corners.
  const auto corners = boundary_origins({0.0, 0.0}, {4000.0, 4000.0}, 4000.0);
  ASSERT_EQ(corners.size(), 4u);

  const auto offset = boundary_origins({-50.0, -50.0}, {250.0, 250.0}, 50.0);
  EXPECT_EQ(offset.size(), 24u);
  EXPECT_EQ(offset[0].x, -50.0);
  EXPECT_EQ(offset[0].y, -50.0);
}

TEST(BoundaryOrigins, RejectsBadSpacingAndEmptyBoxes) {
  EXPECT_THROW(boundary_origins({0.0, 0.0}, {4000.0, 4000.0}, 300.0),
               std::invalid_argument);
  EXPECT_THROW(boundary_origins({0.0, 0.0}, {4000.0, 2000.0}, 800.0),
               std::invalid_argument);  // divides x, not y
  EXPECT_THROW(boundary_origins({0.0, 0.0}, {4000.0, 4000.0}, 0.0),
               std::invalid_argument);
  EXPECT_THROW(boundary_origins({0.0, 0.0}, {4000.0, 4000.0}, -100.0),
               std::invalid_argument);
  EXPECT_THROW(boundary_origins({0.0, 0.0}, {0.0, 4000.0}, 100.0),
               std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Baseline policies.
// ---------------------------------------------------------------------------

TEST(Policies, StraightPolicyHoldsCourseAndCruiseSpeed) {
  const StraightPolicy hold1(uasguide::static_action_space(), 0.0);
  const Eigen::VectorXd junk = Eigen::VectorXd::Constant(7, -3.5);
  ASSERT_EQ(hold1(junk).size(), 1);
  EXPECT_EQ(hold1(junk)[0], 0.0);

  MovingScenario sc = testutil::tiny_moving_scenario();
  sc.control_mode = uasguide::ControlMode::kHeadingAndSpeed;
  const StraightPolicy hold2(uasguide::moving_action_space(sc), 20.0);
  ASSERT_EQ(hold2(junk).size(), 2);
  EXPECT_EQ(hold2(junk)[0], 0.0);
  EXPECT_EQ(hold2(junk)[1], 20.0);
}

TEST(Policies, MeanPolicyMapsNetworkMeanToPhysicalAction) {
  ActorCritic params;
  params.actor = Mlp(3, {}, 1);
  params.actor.weights[0].setZero();
  params.actor.biases[0].setZero();
  params.actor.biases[0][0] = 0.5;  // raw mean 0.5 regardless of input
  params.critic = Mlp(3, {}, 1);
  params.critic.weights[0].setZero();
  params.critic.biases[0].setZero();
  params.log_std = Eigen::VectorXd::Zero(1);

  const auto space = uasguide::static_action_space();
  const MeanPolicy policy(params, space);
  const Eigen::VectorXd obs = Eigen::VectorXd::Constant(3, 0.7);
  ASSERT_EQ(policy(obs).size(), 1);
  EXPECT_DOUBLE_EQ(policy(obs)[0], kPi / 12.0);  // half of the +30 degree limit
}

// ---------------------------------------------------------------------------
// Single-episode rollout.
// ---------------------------------------------------------------------------

TEST(RunEpisode, RequiresFreshlyResetEnvironment) {
  const StaticScenario sc = testutil::tiny_static_scenario();
  const StraightPolicy policy(uasguide::static_action_space(), 0.0);

  {
    StaticEnv env(sc, 1);  // never reset
    EXPECT_THROW(run_episode(env, policy, 0), std::logic_error);
  }
  {
    StaticEnv env(sc, 1);
    env.reset_at({0.0, 0.0});
    env.step(Eigen::VectorXd::Zero(1));  // already advanced
    EXPECT_THROW(run_episode(env, policy, 0), std::logic_error);
  }
  {
    StaticEnv env(sc, 1);
    env.reset_at({0.0, 0.0});
    run_episode(env, policy, 0);  // runs to termination
    EXPECT_THROW(run_episode(env, policy, 1), std::logic_error);
  }
}

TEST(RunEpisode, DiagonalStraightFlightHitsTheCircle) {
  // From (0, 0) the goal bearing is exactly 45 degrees and the path runs
  // through the circle at (1500, 1500). With 20 m steps the first position
  // strictly inside the 300 m radius is step 92 (the step-91 distance is
  // 301.3 m, comfortably outside).
  const StaticScenario sc = testutil::tiny_static_scenario();
  StaticEnv env(sc, 3);
  env.reset_at({0.0, 0.0});
  const StraightPolicy policy(uasguide::static_action_space(), 0.0);
  const EpisodeRecord rec = run_episode(env, policy, 17);

  EXPECT_EQ(rec.episode_id, 17);
  EXPECT_EQ(rec.origin.x, 0.0);
  EXPECT_EQ(rec.origin.y, 0.0);
  EXPECT_EQ(rec.outcome, Outcome::kConflict);
  EXPECT_EQ(rec.steps, 92);
  EXPECT_TRUE(rec.any_conflict);
  EXPECT_TRUE(std::isnan(rec.min_intruder_distance));

  ASSERT_EQ(rec.trajectory.size(), 93u);
  EXPECT_EQ(rec.trajectory.front().t, 0);
  EXPECT_EQ(rec.trajectory.front().position.x, 0.0);
  EXPECT_EQ(rec.trajectory.front().position.y, 0.0);
  EXPECT_DOUBLE_EQ(rec.trajectory.front().heading, kPi / 4.0);
  EXPECT_DOUBLE_EQ(rec.trajectory.front().speed, 20.0);
  EXPECT_EQ(rec.trajectory.back().t, 92);
  for (std::size_t i = 0; i < rec.trajectory.size(); ++i) {
    EXPECT_EQ(rec.trajectory[i].t, static_cast<int>(i));
  }
}

TEST(RunEpisode, ClearStraightFlightReachesTheGoal) {
  // From (4000, 0) the straight line to the goal passes 1372 m from the
  // obstacle center and enters the 400 m goal disc at step 126.
  const StaticScenario sc = testutil::tiny_static_scenario();
  StaticEnv env(sc, 3);
  env.reset_at({4000.0, 0.0});
  const StraightPolicy policy(uasguide::static_action_space(), 0.0);
  const EpisodeRecord rec = run_episode(env, policy, 0);

  EXPECT_EQ(rec.outcome, Outcome::kGoal);
  EXPECT_EQ(rec.steps, 126);
  EXPECT_FALSE(rec.any_conflict);
  EXPECT_EQ(rec.trajectory.size(), 127u);
}

TEST(RunEpisode, MovingHeadOnEpisodeAggregatesConflictsAndMinDistance) {
  // Head-on geometry: gaps shrink by 4 units per step from 110, so the
  // separation band (< 15) is occupied at steps 24..31 and the closest pass
  // is 2 units (steps 27 and 28). Conflicts do not terminate the episode; the
  // goal arrives at step 85.
  const MovingScenario sc = testutil::tiny_moving_scenario();
  MovingEnv env(sc, 5);
  env.reset();
  const StraightPolicy policy(uasguide::static_action_space(), 0.0);
  const EpisodeRecord rec = run_episode(env, policy, 3);

  EXPECT_EQ(rec.outcome, Outcome::kGoal);
  EXPECT_EQ(rec.steps, 85);
  EXPECT_TRUE(rec.any_conflict);
  EXPECT_DOUBLE_EQ(rec.min_intruder_distance, 2.0);
  ASSERT_EQ(rec.trajectory.size(), 86u);
  EXPECT_DOUBLE_EQ(rec.trajectory.front().speed, 2.0);
}

TEST(RunEpisode, MinIntruderDistanceIncludesTheInitialState) {
  // The intruder starts 20 units ahead and flees at twice the agent's speed:
  // the separation is smallest before anyone moves. Skipping the t = 0 state
  // would report 22 instead.
  MovingScenario sc = testutil::tiny_moving_scenario();
  sc.intruders[0].origin_x = {100.0, 100.0};
  sc.intruders[0].origin_y = {30.0, 30.0};
  sc.intruders[0].heading = {kPi / 2.0, kPi / 2.0};
  sc.intruders[0].speed = 4.0;
  sc.validate();

  MovingEnv env(sc, 11);
  env.reset();
  const StraightPolicy policy(uasguide::static_action_space(), 0.0);
  const EpisodeRecord rec = run_episode(env, policy, 0);

  EXPECT_DOUBLE_EQ(rec.min_intruder_distance, 20.0);
  EXPECT_FALSE(rec.any_conflict);
  EXPECT_EQ(rec.outcome, Outcome::kGoal);
  EXPECT_EQ(rec.steps, 85);
}

// ---------------------------------------------------------------------------
// Boundary sweeps.
// ---------------------------------------------------------------------------

TEST(EvaluateStatic, SweepVisitsEveryBoundaryOriginInOrder) {
  const StaticScenario sc = testutil::tiny_static_scenario();
  const StraightPolicy policy(uasguide::static_action_space(), 0.0);
  const EvalReport report = evaluate_static(sc, policy, 500.0, 7);

  EXPECT_FALSE(report.moving);
  EXPECT_EQ(report.world_unit_m, 1.0);
  EXPECT_EQ(report.separation, sc.separation);
  const auto origins = boundary_origins(sc.airspace_min, sc.airspace_max, 500.0);
  ASSERT_EQ(report.episodes.size(), origins.size());
  for (std::size_t i = 0; i < origins.size(); ++i) {
    EXPECT_EQ(report.episodes[i].episode_id, static_cast<int>(i));
    EXPECT_EQ(report.episodes[i].origin.x, origins[i].x);
    EXPECT_EQ(report.episodes[i].origin.y, origins[i].y);
    EXPECT_NE(report.episodes[i].outcome, Outcome::kOngoing);
    EXPECT_TRUE(std::isnan(report.episodes[i].min_intruder_distance));
  }

  int goals = 0;
  for (const auto& e : report.episodes) goals += e.outcome == Outcome::kGoal ? 1 : 0;
  EXPECT_EQ(report.successes(), goals);
  EXPECT_DOUBLE_EQ(report.success_rate(),
                   static_cast<double>(goals) / static_cast<double>(origins.size()));
}

TEST(EvaluateStatic, RepeatsAreIdenticalAndSeedsMatterUnderUncertainty) {
  StaticScenario sc = testutil::tiny_static_scenario();
  sc.uncertainty = {true, 75.0, 1.0};  // perturb every step
  sc.validate();
  const StraightPolicy policy(uasguide::static_action_space(), 0.0);

  const EvalReport a = evaluate_static(sc, policy, 1000.0, 99);
  const EvalReport b = evaluate_static(sc, policy, 1000.0, 99);
  ASSERT_EQ(a.episodes.size(), 16u);
  ASSERT_EQ(b.episodes.size(), 16u);
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    EXPECT_EQ(a.episodes[i].outcome, b.episodes[i].outcome);
    EXPECT_EQ(a.episodes[i].steps, b.episodes[i].steps);
    ASSERT_EQ(a.episodes[i].trajectory.size(), b.episodes[i].trajectory.size());
    for (std::size_t t = 0; t < a.episodes[i].trajectory.size(); ++t) {
      EXPECT_EQ(a.episodes[i].trajectory[t].position.x,
                b.episodes[i].trajectory[t].position.x);
      EXPECT_EQ(a.episodes[i].trajectory[t].position.y,
                b.episodes[i].trajectory[t].position.y);
    }
  }

  // A different evaluation seed draws different perturbations.
  const EvalReport c = evaluate_static(sc, policy, 1000.0, 100);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.episodes.size() && !any_difference; ++i) {
    const auto& ta = a.episodes[i].trajectory;
    const auto& tc = c.episodes[i].trajectory;
    if (ta.size() != tc.size()) {
      any_difference = true;
      break;
    }
    for (std::size_t t = 0; t < ta.size(); ++t) {
      if (ta[t].position.x != tc[t].position.x ||
          ta[t].position.y != tc[t].position.y) {
        any_difference = true;
        break;
      }
    }
  }
  EXPECT_TRUE(any_difference);
}

TEST(EvaluateStatic, StraightFlightOutcomesMatchClosedFormOracle) {
  // Independent prediction of the do-nothing sweep over all 160 origins:
  // fly the exact goal bearing in closed form and classify each step with
  // goal-first precedence. Every decision is required to sit at least 1e-6 m
  // away from both thresholds so the closed-form positions and the
  // environment's accumulated positions cannot disagree.
  const auto preset = uasguide::make_preset("static-single-circle");
  const auto& sc = std::get<StaticScenario>(preset);
  const Vec2 center{1500.0, 1500.0};
  const double radius = 300.0;

  const StraightPolicy policy(uasguide::static_action_space(), 0.0);
  const EvalReport report = evaluate_static(sc, policy, 100.0, 424242);
  const auto origins = boundary_origins(sc.airspace_min, sc.airspace_max, 100.0);
  ASSERT_EQ(report.episodes.size(), 160u);
  ASSERT_EQ(origins.size(), 160u);

  int abstained = 0;
  for (std::size_t i = 0; i < origins.size(); ++i) {
    const Vec2 o = origins[i];
    const double theta = std::atan2(sc.goal.y - o.y, sc.goal.x - o.x);
    const double vx = sc.agent_speed * std::cos(theta);
    const double vy = sc.agent_speed * std::sin(theta);

    Outcome expected = Outcome::kTimeout;
    int expected_steps = sc.timeout_steps;
    bool knife_edge = false;
    for (int k = 1; k <= sc.timeout_steps; ++k) {
      const Vec2 p{o.x + k * vx, o.y + k * vy};
      const double d_goal = uasguide::distance(p, sc.goal);
      const double d_center = uasguide::distance(p, center);
      // Exact ties are safe: axis-aligned integer flights make both sides
      // compute the identical double, and the inclusive/strict rules are
      // shared. Near-ties are real knife edges (Pythagorean bearings like
      // 8-15-17 put the true distance exactly on the threshold), where the
      // rounding path legitimately decides; the oracle abstains there.
      const bool goal_tie = d_goal != sc.goal_radius &&
                            std::abs(d_goal - sc.goal_radius) <= 1e-6;
      const bool conflict_tie =
          d_center != radius && std::abs(d_center - radius) <= 1e-6;
      if (goal_tie || conflict_tie) {
        knife_edge = true;
        break;
      }
      if (d_goal <= sc.goal_radius) {
        expected = Outcome::kGoal;
        expected_steps = k;
        break;
      }
      if (d_center < radius) {
        expected = Outcome::kConflict;
        expected_steps = k;
        break;
      }
    }
    if (knife_edge) {
      ++abstained;
      continue;
    }

    EXPECT_EQ(report.episodes[i].outcome, expected) << "origin " << i;
    EXPECT_EQ(report.episodes[i].steps, expected_steps) << "origin " << i;
  }
  // The single-circle layout contains only a handful of knife-edge bearings.
  EXPECT_LE(abstained, 12);

  // The obstacle blocks some bearings but not all of them.
  EXPECT_GT(report.successes(), 0);
  EXPECT_LT(report.successes(), 160);
}

TEST(EvaluateMoving, FixedScenarioGivesIdenticalReproducibleEpisodes) {
  const MovingScenario sc = testutil::tiny_moving_scenario();
  const StraightPolicy policy(uasguide::static_action_space(), 0.0);

  const EvalReport a = evaluate_moving(sc, policy, 20, 123);
  EXPECT_TRUE(a.moving);
  EXPECT_EQ(a.world_unit_m, sc.world_unit_m);
  EXPECT_EQ(a.separation, sc.separation);
  ASSERT_EQ(a.episodes.size(), 20u);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(a.episodes[static_cast<std::size_t>(i)].episode_id, i);
    // Every interval in the scenario is a point, so all episodes coincide.
    EXPECT_EQ(a.episodes[static_cast<std::size_t>(i)].outcome, Outcome::kGoal);
    EXPECT_EQ(a.episodes[static_cast<std::size_t>(i)].steps, 85);
    EXPECT_DOUBLE_EQ(a.episodes[static_cast<std::size_t>(i)].min_intruder_distance, 2.0);
  }

  const EvalReport b = evaluate_moving(sc, policy, 20, 123);
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    EXPECT_EQ(a.episodes[i].min_intruder_distance, b.episodes[i].min_intruder_distance);
    EXPECT_EQ(a.episodes[i].steps, b.episodes[i].steps);
  }

  EXPECT_THROW(evaluate_moving(sc, policy, 0, 123), std::invalid_argument);
  EXPECT_THROW(evaluate_moving(sc, policy, -5, 123), std::invalid_argument);
}

TEST(EvaluateMoving, RandomizedOriginsAreSeededPerEpisode) {
  MovingScenario sc = testutil::tiny_moving_scenario();
  sc.agent_origin_x = {75.0, 135.0};
  sc.intruders[0].origin_y = {100.0, 140.0};
  sc.validate();
  const StraightPolicy policy(uasguide::static_action_space(), 0.0);

  const EvalReport a = evaluate_moving(sc, policy, 8, 31);
  const EvalReport b = evaluate_moving(sc, policy, 8, 31);
  ASSERT_EQ(a.episodes.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(a.episodes[i].origin.x, b.episodes[i].origin.x);
    EXPECT_EQ(a.episodes[i].origin.y, b.episodes[i].origin.y);
  }

  // Different episodes draw different origins...
  bool episodes_differ = false;
  for (std::size_t i = 1; i < 8; ++i) {
    episodes_differ = episodes_differ || a.episodes[i].origin.x != a.episodes[0].origin.x;
  }
  EXPECT_TRUE(episodes_differ);

  // ...and a different sweep seed moves them.
  const EvalReport c = evaluate_moving(sc, policy, 8, 32);
  bool seeds_differ = false;
  for (std::size_t i = 0; i < 8; ++i) {
    seeds_differ = seeds_differ || a.episodes[i].origin.x != c.episodes[i].origin.x;
  }
  EXPECT_TRUE(seeds_differ);
}

// ---------------------------------------------------------------------------
// CSV serialization.
// ---------------------------------------------------------------------------

EvalReport sample_report() {
  EvalReport r;
  r.moving = true;
  r.world_unit_m = 10.0;
  r.separation = 15.0;

  EpisodeRecord e0;
  e0.episode_id = 0;
  e0.origin = {10.5, 20.25};
  e0.outcome = Outcome::kGoal;
  e0.steps = 1;
  e0.any_conflict = false;
  e0.min_intruder_distance = 4.5;
  e0.trajectory = {{0, {10.5, 20.25}, kPi / 2.0, 2.0}, {1, {10.5, 22.25}, kPi / 2.0, 2.0}};

  EpisodeRecord e1;
  e1.episode_id = 1;
  e1.origin = {0.0, 0.0};
  e1.outcome = Outcome::kTimeout;
  e1.steps = 300;
  e1.trajectory = {{0, {0.0, 0.0}, 0.0, 2.0}};
  // min_intruder_distance left NaN

  r.episodes = {e0, e1};
  return r;
}

TEST(EvalCsv, ReportRoundTripsThroughMeters) {
  const EvalReport r = sample_report();
  const std::string text = uasguide::report_to_csv(r);

  // World units leave multiplied into meters; a NaN minimum distance leaves
  // as an empty field.
  EXPECT_NE(text.find("0,105,202.5,goal,1,45\n"), std::string::npos) << text;
  EXPECT_NE(text.find("1,0,0,timeout,300,\n"), std::string::npos) << text;

  const auto rows = uasguide::parse_report_csv(text);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].episode_id, 0);
  EXPECT_DOUBLE_EQ(rows[0].origin_m.x, 105.0);
  EXPECT_DOUBLE_EQ(rows[0].origin_m.y, 202.5);
  EXPECT_EQ(rows[0].outcome, "goal");
  EXPECT_EQ(rows[0].steps, 1);
  EXPECT_DOUBLE_EQ(rows[0].min_distance_m, 45.0);
  EXPECT_EQ(rows[1].outcome, "timeout");
  EXPECT_EQ(rows[1].steps, 300);
  EXPECT_TRUE(std::isnan(rows[1].min_distance_m));
}

TEST(EvalCsv, TrajectoriesRoundTripWithDegreesAndMeters) {
  const EvalReport r = sample_report();
  const std::string text = uasguide::trajectories_to_csv(r);
  const auto rows = uasguide::parse_trajectories_csv(text);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].episode_id, 0);
  EXPECT_EQ(rows[0].t, 0);
  EXPECT_DOUBLE_EQ(rows[0].position_m.x, 105.0);
  EXPECT_DOUBLE_EQ(rows[0].position_m.y, 202.5);
  EXPECT_NEAR(rows[0].heading_deg, 90.0, 1e-9);
  EXPECT_DOUBLE_EQ(rows[0].speed_mps, 20.0);
  EXPECT_EQ(rows[1].t, 1);
  EXPECT_DOUBLE_EQ(rows[1].position_m.y, 222.5);
  EXPECT_EQ(rows[2].episode_id, 1);
  EXPECT_EQ(rows[2].t, 0);
}

TEST(EvalCsv, AcceptsCrlfAndBlankLines) {
  std::string text = uasguide::report_to_csv(sample_report());
  std::string crlf;
  for (const char ch : text) {
    if (ch == '\n') crlf += "\r\n";
    else crlf += ch;
  }
  crlf += "\r\n\r\n";
  const auto rows = uasguide::parse_report_csv(crlf);
  EXPECT_EQ(rows.size(), 2u);
}

TEST(EvalCsv, HeaderOnlyReportIsEmptyAndEmptyFileThrows) {
  const auto rows = uasguide::parse_report_csv(std::string(uasguide::kReportHeader) + "\n");
  EXPECT_TRUE(rows.empty());
  EXPECT_THROW(uasguide::parse_report_csv(""), std::invalid_argument);
}

TEST(EvalCsv, ParseErrorsCarryLineNumbers) {
  const std::string hdr = std::string(uasguide::kReportHeader) + "\n";

  try {
    uasguide::parse_report_csv("episode,oops\n");
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos) << e.what();
  }

  try {
    uasguide::parse_report_csv(hdr + "0,0,0,goal,5\n");  // 5 fields
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("expected 6 fields"), std::string::npos) << msg;
  }

  try {
    uasguide::parse_report_csv(hdr + "0,0,0,goal,5,\n" + "1,0,0,goal,x,\n");
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }

  EXPECT_THROW(uasguide::parse_report_csv(hdr + "0,0,0,crashed,5,\n"),
               std::invalid_argument);

  const std::string thdr = std::string(uasguide::kTrajectoryHeader) + "\n";
  EXPECT_THROW(uasguide::parse_trajectories_csv("nope\n"), std::invalid_argument);
  try {
    uasguide::parse_trajectories_csv(thdr + "0,0,1,2,3\n");  // 5 fields
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("expected 6 fields"), std::string::npos);
  }
}

TEST(EvalCsv, CurveRowsRoundTripIncludingNanSentinels) {
  const std::string row0 = uasguide::curve_record_to_csv_row(
      2048, 0, std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN(), 0.125, -0.5, 1.75);
  EXPECT_EQ(row0, "2048,0,nan,nan,0.125,-0.5,1.75\n");

  const std::string text = std::string(uasguide::kCurveHeader) + "\n" + row0 +
                           "100000,42,-3.5,512.25,0.0625,-0.03125,2.5\n";
  const auto rows = uasguide::parse_curve_csv(text);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].env_steps, 2048);
  EXPECT_EQ(rows[0].episodes, 0);
  EXPECT_TRUE(std::isnan(rows[0].episode_reward_mean));
  EXPECT_TRUE(std::isnan(rows[0].episode_length_mean));
  EXPECT_DOUBLE_EQ(rows[0].clip_fraction, 0.125);
  EXPECT_DOUBLE_EQ(rows[0].actor_loss, -0.5);
  EXPECT_DOUBLE_EQ(rows[0].critic_loss, 1.75);
  EXPECT_EQ(rows[1].env_steps, 100000);
  EXPECT_EQ(rows[1].episodes, 42);
  EXPECT_DOUBLE_EQ(rows[1].episode_reward_mean, -3.5);
  EXPECT_DOUBLE_EQ(rows[1].episode_length_mean, 512.25);

  EXPECT_THROW(uasguide::parse_curve_csv("wrong header\n"), std::invalid_argument);
  try {
    uasguide::parse_curve_csv(std::string(uasguide::kCurveHeader) + "\n1,2,3,4,5,6\n");
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("expected 7 fields"), std::string::npos);
  }
}

TEST(EvalCsv, OutcomeNamesMatchTheReportVocabulary) {
  EXPECT_STREQ(uasguide::outcome_name(Outcome::kOngoing), "ongoing");
  EXPECT_STREQ(uasguide::outcome_name(Outcome::kGoal), "goal");
  EXPECT_STREQ(uasguide::outcome_name(Outcome::kConflict), "conflict");
  EXPECT_STREQ(uasguide::outcome_name(Outcome::kTimeout), "timeout");
}

}  // namespace
