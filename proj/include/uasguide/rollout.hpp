#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uasguide/env_static.hpp"
#include "uasguide/policy.hpp"
#include "uasguide/rng.hpp"

namespace uasguide {

// On-policy experience for one collection segment from one environment
// instance. Column t of the matrices belongs to step t.
struct RolloutBuffer {
  Eigen::MatrixXd observations;  // obs_dim x n
  Eigen::MatrixXd raw_actions;   // act_dim x n (pre-clamp normalized samples)
  Eigen::VectorXd rewards;
  Eigen::VectorXd values;        // V(s_t) under the collecting policy
  Eigen::VectorXd log_probs;     // log pi(a_t | s_t), raw sample density
  std::vector<std::uint8_t> terminals;  // 1 if the episode ended at step t
  double bootstrap_value = 0.0;  // V of the state after the last step (0 if terminal)

  // Episodes that finished during collection, in completion order.
  std::vector<double> finished_episode_returns;
  std::vector<int> finished_episode_lengths;

  int size() const { return static_cast<int>(rewards.size()); }

  void allocate(int obs_dim, int act_dim, int n) {
    observations.resize(obs_dim, n);
    raw_actions.resize(act_dim, n);
    rewards.resize(n);
    values.resize(n);
    log_probs.resize(n);
    terminals.assign(static_cast<std::size_t>(n), 0);
    finished_episode_returns.clear();
    finished_episode_lengths.clear();
  }
};

// Runs the stochastic policy for `steps` env steps, resuming the env's
// current episode and resetting on termination. `rng` drives only the action
// sampling; env randomness lives in the env's own stream.
template <typename EnvT>
RolloutBuffer collect_rollout(EnvT& env, const ActorCritic& params,
                              const ActionSpace& space, int steps, Rng& rng) {
  if (steps <= 0) throw std::invalid_argument("collect_rollout: steps must be > 0");
  RolloutBuffer buf;
  buf.allocate(env.observation_dim(), params.act_dim(), steps);

  Eigen::VectorXd obs =
      (!env.started() || env.done()) ? env.reset() : env.current_observation();
  for (int t = 0; t < steps; ++t) {
    const ActionDistribution dist = params.action_distribution(obs);
    const Eigen::VectorXd raw = sample_raw(dist, rng);
    buf.observations.col(t) = obs;
    buf.raw_actions.col(t) = raw;
    buf.values[t] = params.value(obs);
    buf.log_probs[t] = log_prob(dist, raw);

    const StepResult res = env.step(space.to_physical(raw));
    buf.rewards[t] = res.reward;
    buf.terminals[static_cast<std::size_t>(t)] = res.done ? 1 : 0;
    if (res.done) {
      buf.finished_episode_returns.push_back(env.episode_return());
      buf.finished_episode_lengths.push_back(env.steps());
      obs = env.reset();
    } else {
      obs = res.observation;
    }
  }
  buf.bootstrap_value =
      buf.terminals.back() ? 0.0 : params.value(obs);
  return buf;
}

enum class AdvantageMode {
  kGae,                // generalized advantage estimation with lambda
  kReturnsMinusValue,  // A_t = R_t - V(s_t), discounted reward-to-go returns
};

struct ReturnsAndAdvantages {
  Eigen::VectorXd returns;
  Eigen::VectorXd advantages;
};

// Backward-recursive targets. Terminal steps cut the bootstrap chain; the
// segment's trailing partial episode bootstraps with buf.bootstrap_value.
// GAE with lambda = 1 coincides with the returns-minus-value mode exactly.
inline ReturnsAndAdvantages compute_returns_advantages(const RolloutBuffer& buf,
                                                       double gamma, double lambda,
                                                       AdvantageMode mode) {
  const int n = buf.size();
  ReturnsAndAdvantages out;
  out.returns.resize(n);
  out.advantages.resize(n);
  if (mode == AdvantageMode::kGae) {
    double gae = 0.0;
    for (int t = n - 1; t >= 0; --t) {
      const double nonterm = buf.terminals[static_cast<std::size_t>(t)] ? 0.0 : 1.0;
      const double v_next = (t == n - 1) ? buf.bootstrap_value : buf.values[t + 1];
      const double delta = buf.rewards[t] + gamma * v_next * nonterm - buf.values[t];
      gae = delta + gamma * lambda * nonterm * gae;
      out.advantages[t] = gae;
      out.returns[t] = gae + buf.values[t];
    }
  } else {
    double running = buf.bootstrap_value;
    for (int t = n - 1; t >= 0; --t) {
      if (buf.terminals[static_cast<std::size_t>(t)]) running = 0.0;
      running = buf.rewards[t] + gamma * running;
      out.returns[t] = running;
      out.advantages[t] = running - buf.values[t];
    }
  }
  return out;
}

// Concatenated, update-ready batch (slot segments in fixed slot order).
struct TrainingBatch {
  Eigen::MatrixXd observations;
  Eigen::MatrixXd raw_actions;
  Eigen::VectorXd log_probs;
  Eigen::VectorXd returns;
  Eigen::VectorXd advantages;

  int size() const { return static_cast<int>(log_probs.size()); }
};

inline TrainingBatch assemble_batch(const std::vector<RolloutBuffer>& buffers,
                                    const std::vector<ReturnsAndAdvantages>& targets,
                                    bool normalize_advantages) {
  if (buffers.empty() || buffers.size() != targets.size())
    throw std::invalid_argument("assemble_batch: buffer/target mismatch");
  int n = 0;
  for (const auto& b : buffers) n += b.size();
  TrainingBatch batch;
  batch.observations.resize(buffers[0].observations.rows(), n);
  batch.raw_actions.resize(buffers[0].raw_actions.rows(), n);
  batch.log_probs.resize(n);
  batch.returns.resize(n);
  batch.advantages.resize(n);
  int at = 0;
  for (std::size_t i = 0; i < buffers.size(); ++i) {
    const int m = buffers[i].size();
    batch.observations.middleCols(at, m) = buffers[i].observations;
    batch.raw_actions.middleCols(at, m) = buffers[i].raw_actions;
    batch.log_probs.segment(at, m) = buffers[i].log_probs;
    batch.returns.segment(at, m) = targets[i].returns;
    batch.advantages.segment(at, m) = targets[i].advantages;
    at += m;
  }
  if (normalize_advantages && n > 1) {
    const double mean = batch.advantages.mean();
    const double var =
        (batch.advantages.array() - mean).square().sum() / static_cast<double>(n);
    batch.advantages = (batch.advantages.array() - mean) / (std::sqrt(var) + 1e-8);
  }
  return batch;
}

}  // namespace uasguide
