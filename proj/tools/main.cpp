// uasguide: train, evaluate and plot guidance policies for the static-obstacle
// and moving-intruder avoidance tasks.
//
// Exit codes: 0 success; 2 invalid input (CLI usage, scenario/CSV validation,
// checkpoint/scenario mismatch); 3 training numerics failure (a checkpoint of
// the last consistent parameters is still written).

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "uasguide/uasguide.hpp"

namespace fs = std::filesystem;
using namespace uasguide;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumerics = 3;

struct ScenarioChoice {
  Scenario scenario;
  std::string path;    // empty when preset-built
  std::string source;  // "file" | "preset:<name>"
};

ScenarioChoice resolve_scenario(const std::string& scenario_path,
                                const std::string& preset) {
  if (scenario_path.empty() == preset.empty()) {
    throw std::invalid_argument("exactly one of --scenario or --preset is required");
  }
  ScenarioChoice c;
  if (!preset.empty()) {
    c.scenario = make_preset(preset);
    c.source = "preset:" + preset;
  } else {
    c.scenario = load_scenario(scenario_path);
    c.path = scenario_path;
    c.source = "file";
  }
  return c;
}

nlohmann::json config_to_json(const TrainConfig& cfg) {
  nlohmann::json j;
  j["total_steps"] = cfg.total_steps;
  j["horizon"] = cfg.horizon;
  j["minibatch_size"] = cfg.minibatch_size;
  j["epochs_per_update"] = cfg.epochs_per_update;
  j["gamma"] = cfg.gamma;
  j["gae_lambda"] = cfg.gae_lambda;
  j["clip_epsilon"] = cfg.clip_epsilon;
  j["entropy_coef"] = cfg.entropy_coef;
  j["learning_rate"] = cfg.learning_rate;
  j["max_grad_norm"] = cfg.max_grad_norm;
  j["value_coef"] = cfg.value_coef;
  j["num_envs"] = cfg.num_envs;
  j["workers"] = cfg.workers;
  j["seed"] = cfg.seed;
  j["advantage_mode"] =
      cfg.advantage_mode == AdvantageMode::kGae ? "gae" : "returns_minus_value";
  j["normalize_advantages"] = cfg.normalize_advantages;
  j["checkpoint_interval"] = cfg.checkpoint_interval;
  return j;
}

std::string control_mode_string(const Scenario& sc) {
  if (const auto* m = std::get_if<MovingScenario>(&sc)) {
    return m->control_mode == ControlMode::kHeadingOnly ? "heading_only"
                                                        : "heading_and_speed";
  }
  return "static";
}

Checkpoint make_checkpoint(const ActorCritic& params, const Scenario& sc) {
  Checkpoint ck;
  ck.params = params;
  ck.scenario_fingerprint = scenario_fingerprint(sc);
  ck.control_mode = control_mode_string(sc);
  if (const auto* m = std::get_if<MovingScenario>(&sc)) {
    ck.position_scale = m->diagonal();
    ck.velocity_scale = m->max_speed;
  } else {
    const auto& s = std::get<StaticScenario>(sc);
    ck.position_scale = s.diagonal();
    ck.velocity_scale = s.agent_speed;
  }
  return ck;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string scenario_path;
  std::string preset;
  std::string out_dir = "run";
  TrainConfig cfg;
  std::string advantage_mode = "gae";
  bool no_normalize_advantages = false;
  int log_interval = 10;  // progress print every N cycles
};

template <typename EnvT>
int run_training(const ScenarioChoice& choice, const typename EnvT::ScenarioType& sc,
                 const TrainArgs& args) {
  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  const std::string curve_path = (out_dir / "curve.csv").string();
  const std::string checkpoint_path = (out_dir / "checkpoint.json").string();
  const std::string manifest_path = (out_dir / "manifest.json").string();

  RunManifest manifest;
  manifest.command = "train";
  manifest.scenario_path = choice.path;
  manifest.scenario_source = choice.source;
  manifest.scenario_hash = scenario_fingerprint(choice.scenario);
  manifest.config = config_to_json(args.cfg);
  manifest.seed = args.cfg.seed;
  manifest.started_at = iso8601_utc(std::chrono::system_clock::now());

  std::ofstream curve(curve_path, std::ios::binary | std::ios::trunc);
  if (!curve) throw std::runtime_error("cannot open " + curve_path);
  curve << kCurveHeader << "\n";
  curve.flush();

  const ActionSpace space = action_space_for(choice.scenario);
  Trainer<EnvT> trainer(sc, space, args.cfg);

  long long cycle = 0;
  const long long cycles =
      (args.cfg.total_steps + args.cfg.horizon - 1) / args.cfg.horizon;
  const auto t0 = std::chrono::steady_clock::now();

  auto finish = [&](int code) {
    make_checkpoint(trainer.params(), choice.scenario).save(checkpoint_path);
    manifest.finished_at = iso8601_utc(std::chrono::system_clock::now());
    manifest.outputs = {curve_path, checkpoint_path};
    manifest.write(manifest_path);
    return code;
  };

  try {
    trainer.run([&](const CurveRecord& rec, const ActorCritic& params) {
      curve << curve_record_to_csv_row(rec.env_steps, rec.episodes,
                                       rec.episode_reward_mean, rec.episode_length_mean,
                                       rec.clip_fraction, rec.actor_loss,
                                       rec.critic_loss);
      curve.flush();
      ++cycle;
      if (args.cfg.checkpoint_interval > 0 && cycle % args.cfg.checkpoint_interval == 0) {
        make_checkpoint(params, choice.scenario).save(checkpoint_path);
      }
      if (args.log_interval > 0 && cycle % args.log_interval == 0) {
        const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
        std::cout << "cycle " << cycle << "/" << cycles << "  steps " << rec.env_steps
                  << "  episodes " << rec.episodes << "  reward_mean "
                  << (std::isnan(rec.episode_reward_mean)
                          ? std::string("n/a")
                          : format_double(rec.episode_reward_mean, 2))
                  << "  clip_frac " << format_double(rec.clip_fraction, 3) << "  ["
                  << format_double(dt.count(), 1) << "s]\n";
        std::cout.flush();
      }
    });
  } catch (const PpoNumericsError& e) {
    std::cerr << "error: training aborted: " << e.what() << "\n"
              << "last consistent parameters saved to " << checkpoint_path << "\n";
    return finish(kExitNumerics);
  }
  return finish(kExitOk);
}

int cmd_train(const TrainArgs& args_in) {
  TrainArgs args = args_in;
  if (args.advantage_mode == "gae") {
    args.cfg.advantage_mode = AdvantageMode::kGae;
  } else if (args.advantage_mode == "returns_minus_value") {
    args.cfg.advantage_mode = AdvantageMode::kReturnsMinusValue;
  } else {
    throw std::invalid_argument("--advantage-mode must be gae or returns_minus_value");
  }
  args.cfg.normalize_advantages = !args.no_normalize_advantages;
  args.cfg.validate();

  const ScenarioChoice choice = resolve_scenario(args.scenario_path, args.preset);
  if (const auto* m = std::get_if<MovingScenario>(&choice.scenario)) {
    return run_training<MovingEnv>(choice, *m, args);
  }
  return run_training<StaticEnv>(choice, std::get<StaticScenario>(choice.scenario), args);
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint_path;
  std::string scenario_path;
  std::string preset;
  std::string report_path = "eval_report.csv";
  std::string trajectories_path;  // optional
  int episodes = 500;
  double spacing = 100.0;
  std::uint64_t eval_seed = 0;
  bool stochastic = false;  // sample actions instead of taking the mean
};

int cmd_eval(const EvalArgs& args) {
  const ScenarioChoice choice = resolve_scenario(args.scenario_path, args.preset);
  const Checkpoint ck = Checkpoint::load(args.checkpoint_path);
  const std::string fp = scenario_fingerprint(choice.scenario);
  if (ck.scenario_fingerprint != fp) {
    throw std::invalid_argument("checkpoint was trained for scenario " +
                                ck.scenario_fingerprint + " but this scenario is " + fp +
                                "; refusing to evaluate");
  }
  const ActionSpace space = action_space_for(choice.scenario);
  if (ck.params.act_dim() != space.dim()) {
    throw std::invalid_argument("checkpoint action dimension does not match scenario");
  }

  EvalReport report;
  Rng sample_rng(Rng::derive(args.eval_seed, 77));
  const auto policy = [&](const Eigen::VectorXd& obs) -> Eigen::VectorXd {
    const ActionDistribution dist = ck.params.action_distribution(obs);
    return space.to_physical(args.stochastic ? sample_raw(dist, sample_rng) : dist.mean);
  };
  if (const auto* m = std::get_if<MovingScenario>(&choice.scenario)) {
    report = evaluate_moving(*m, policy, args.episodes, args.eval_seed);
  } else {
    report = evaluate_static(std::get<StaticScenario>(choice.scenario), policy,
                             args.spacing, args.eval_seed);
  }

  write_text_file_atomic(args.report_path, report_to_csv(report));
  std::vector<std::string> outputs = {args.report_path};
  if (!args.trajectories_path.empty()) {
    write_text_file_atomic(args.trajectories_path, trajectories_to_csv(report));
    outputs.push_back(args.trajectories_path);
  }

  int conflicts = 0, timeouts = 0;
  double min_d = std::numeric_limits<double>::infinity();
  for (const auto& e : report.episodes) {
    conflicts += e.outcome == Outcome::kConflict ? 1 : 0;
    timeouts += e.outcome == Outcome::kTimeout ? 1 : 0;
    if (!std::isnan(e.min_intruder_distance))
      min_d = std::min(min_d, e.min_intruder_distance);
  }
  std::cout << "episodes " << report.episodes.size() << "  goal " << report.successes()
            << "  conflict " << conflicts << "  timeout " << timeouts
            << "  success_rate " << format_double(report.success_rate(), 4);
  if (report.moving && std::isfinite(min_d)) {
    std::cout << "  min_distance_m " << format_double(min_d * report.world_unit_m, 1);
  }
  std::cout << "\n";

  RunManifest manifest;
  manifest.command = "eval";
  manifest.scenario_path = choice.path;
  manifest.scenario_source = choice.source;
  manifest.scenario_hash = fp;
  manifest.config = {{"checkpoint", args.checkpoint_path},
                     {"episodes", args.episodes},
                     {"spacing", args.spacing},
                     {"stochastic", args.stochastic}};
  manifest.seed = args.eval_seed;
  manifest.started_at = manifest.finished_at = iso8601_utc(std::chrono::system_clock::now());
  manifest.outputs = outputs;
  const fs::path report_dir = fs::path(args.report_path).parent_path();
  manifest.write((report_dir.empty() ? fs::path(".") : report_dir) / "eval_manifest.json");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------------

struct PlotArgs {
  std::string report_path;
  std::string trajectories_path;
  std::string curve_path;
  std::string scenario_path;
  std::string preset;
  std::string out_path;
  std::string style = "auto";
  int episode = -1;  // moving-field: which episode to draw (-1 = first)
};

int cmd_plot(const PlotArgs& args) {
  std::optional<Scenario> scenario;
  if (!args.scenario_path.empty() || !args.preset.empty()) {
    scenario = resolve_scenario(args.scenario_path, args.preset).scenario;
  }

  std::string style = args.style;
  if (style == "auto") {
    if (!args.curve_path.empty()) {
      style = "curve";
    } else if (!args.trajectories_path.empty()) {
      style = (scenario && is_moving(*scenario)) ? "moving-field" : "static-field";
    } else if (!args.report_path.empty()) {
      style = "min-distance";
    } else {
      throw std::invalid_argument("nothing to plot: pass --report, --trajectories or --curve");
    }
  }

  std::string svg_text;
  if (style == "curve") {
    if (args.curve_path.empty()) throw std::invalid_argument("--curve is required for style curve");
    svg_text = render_learning_curve(parse_curve_csv(read_text_file(args.curve_path)));
  } else if (style == "min-distance") {
    if (args.report_path.empty())
      throw std::invalid_argument("--report is required for style min-distance");
    const auto rows = parse_report_csv(read_text_file(args.report_path));
    double separation_m = 150.0;
    if (scenario) {
      if (const auto* m = std::get_if<MovingScenario>(&*scenario)) {
        separation_m = m->separation * m->world_unit_m;
      } else {
        separation_m = std::get<StaticScenario>(*scenario).separation;
      }
    }
    svg_text = render_min_distance_scatter(rows, separation_m);
  } else if (style == "static-field") {
    if (args.trajectories_path.empty())
      throw std::invalid_argument("--trajectories is required for style static-field");
    std::vector<ReportRow> report;
    if (!args.report_path.empty())
      report = parse_report_csv(read_text_file(args.report_path));
    std::optional<StaticScenario> sc;
    if (scenario) {
      const auto* s = std::get_if<StaticScenario>(&*scenario);
      if (!s) throw std::invalid_argument("static-field plot needs a static scenario");
      sc = *s;
    }
    svg_text = render_static_field(
        report, parse_trajectories_csv(read_text_file(args.trajectories_path)), sc);
  } else if (style == "moving-field") {
    if (args.trajectories_path.empty())
      throw std::invalid_argument("--trajectories is required for style moving-field");
    auto rows = parse_trajectories_csv(read_text_file(args.trajectories_path));
    std::optional<MovingScenario> sc;
    int circle_interval = 5, label_interval = 10;
    if (scenario) {
      const auto* m = std::get_if<MovingScenario>(&*scenario);
      if (!m) throw std::invalid_argument("moving-field plot needs a moving scenario");
      sc = *m;
      if (m->control_mode == ControlMode::kHeadingAndSpeed) {
        circle_interval = 3;
        label_interval = 6;
      }
    }
    const int want = args.episode >= 0 ? args.episode
                     : rows.empty()    ? 0
                                       : rows.front().episode_id;
    std::vector<TrajectoryRow> ep;
    for (const auto& r : rows) {
      if (r.episode_id == want) ep.push_back(r);
    }
    if (ep.empty() && !rows.empty())
      throw std::invalid_argument("episode " + std::to_string(want) +
                                  " not present in trajectory CSV");
    svg_text = render_moving_field(ep, sc, circle_interval, label_interval);
  } else {
    throw std::invalid_argument(
        "unknown --style (use auto, static-field, moving-field, min-distance, curve)");
  }

  write_text_file_atomic(args.out_path, svg_text);
  std::cout << "wrote " << args.out_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

int cmd_preset(const std::string& name, const std::string& out_path) {
  if (name.empty()) {
    for (const auto& n : preset_names()) std::cout << n << "\n";
    return kExitOk;
  }
  const Scenario sc = make_preset(name);
  const std::string text = scenario_to_json(sc).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file_atomic(out_path, text);
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guidance policy training and evaluation for obstacle/intruder avoidance"};
  app.require_subcommand(1);

  // --- train ---
  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train a policy with PPO");
  train->add_option("--scenario", train_args.scenario_path, "scenario JSON file");
  train->add_option("--preset", train_args.preset, "built-in scenario name");
  train->add_option("--out", train_args.out_dir, "output directory")
      ->capture_default_str();
  train->add_option("--steps", train_args.cfg.total_steps, "total environment steps")
      ->capture_default_str();
  train->add_option("--seed", train_args.cfg.seed, "master seed")->capture_default_str();
  train->add_option("--horizon", train_args.cfg.horizon, "env steps per update")
      ->capture_default_str();
  train->add_option("--minibatch", train_args.cfg.minibatch_size, "minibatch size")
      ->capture_default_str();
  train->add_option("--epochs", train_args.cfg.epochs_per_update, "epochs per update")
      ->capture_default_str();
  train->add_option("--gamma", train_args.cfg.gamma, "discount factor")
      ->capture_default_str();
  train->add_option("--lambda", train_args.cfg.gae_lambda, "GAE lambda")
      ->capture_default_str();
  train->add_option("--clip", train_args.cfg.clip_epsilon, "PPO clip epsilon")
      ->capture_default_str();
  train->add_option("--entropy-coef", train_args.cfg.entropy_coef, "entropy bonus weight")
      ->capture_default_str();
  train->add_option("--lr", train_args.cfg.learning_rate, "Adam learning rate")
      ->capture_default_str();
  train->add_option("--max-grad-norm", train_args.cfg.max_grad_norm,
                    "global gradient norm clip (0 disables)")
      ->capture_default_str();
  train->add_option("--value-coef", train_args.cfg.value_coef, "critic loss weight")
      ->capture_default_str();
  train->add_option("--num-envs", train_args.cfg.num_envs, "parallel rollout slots")
      ->capture_default_str();
  train->add_option("--workers", train_args.cfg.workers,
                    "collection threads (does not affect results)")
      ->capture_default_str();
  train->add_option("--advantage-mode", train_args.advantage_mode,
                    "gae | returns_minus_value")
      ->capture_default_str();
  train->add_flag("--no-normalize-advantages", train_args.no_normalize_advantages,
                  "skip per-batch advantage normalization");
  train->add_option("--checkpoint-interval", train_args.cfg.checkpoint_interval,
                    "cycles between periodic checkpoints (0 = final only)")
      ->capture_default_str();
  train->add_option("--log-interval", train_args.log_interval,
                    "cycles between progress lines (0 silences)")
      ->capture_default_str();

  // --- eval ---
  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--checkpoint", eval_args.checkpoint_path, "checkpoint JSON")
      ->required();
  eval->add_option("--scenario", eval_args.scenario_path, "scenario JSON file");
  eval->add_option("--preset", eval_args.preset, "built-in scenario name");
  eval->add_option("--report", eval_args.report_path, "episode report CSV path")
      ->capture_default_str();
  eval->add_option("--trajectories", eval_args.trajectories_path,
                   "also write per-step trajectories CSV");
  eval->add_option("--episodes", eval_args.episodes,
                   "episode count (moving scenarios)")
      ->capture_default_str();
  eval->add_option("--spacing", eval_args.spacing,
                   "boundary origin spacing in meters (static scenarios)")
      ->capture_default_str();
  eval->add_option("--eval-seed", eval_args.eval_seed, "evaluation seed")
      ->capture_default_str();
  eval->add_flag("--stochastic", eval_args.stochastic,
                 "sample actions instead of using the mean");

  // --- plot ---
  PlotArgs plot_args;
  auto* plot = app.add_subcommand("plot", "render SVG figures from CSV outputs");
  plot->add_option("--report", plot_args.report_path, "episode report CSV");
  plot->add_option("--trajectories", plot_args.trajectories_path, "trajectories CSV");
  plot->add_option("--curve", plot_args.curve_path, "learning-curve CSV");
  plot->add_option("--scenario", plot_args.scenario_path,
                   "scenario JSON (draws obstacles/goal/intruders)");
  plot->add_option("--preset", plot_args.preset, "built-in scenario name");
  plot->add_option("--style", plot_args.style,
                   "auto | static-field | moving-field | min-distance | curve")
      ->capture_default_str();
  plot->add_option("--episode", plot_args.episode,
                   "episode id for moving-field (default: first in file)");
  plot->add_option("--out", plot_args.out_path, "output SVG path")->required();

  // --- preset ---
  std::string preset_name, preset_out;
  auto* preset = app.add_subcommand("preset", "print or write a built-in scenario");
  preset->add_option("name", preset_name, "preset name (omit to list)");
  preset->add_option("--out", preset_out, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (train->parsed()) return cmd_train(train_args);
    if (eval->parsed()) return cmd_eval(eval_args);
    if (plot->parsed()) return cmd_plot(plot_args);
    if (preset->parsed()) return cmd_preset(preset_name, preset_out);
  } catch (const PpoNumericsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerics;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
