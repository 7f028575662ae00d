#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "uasguide/policy.hpp"
#include "uasguide/rollout.hpp"

namespace uasguide {

// Training diverged into non-finite territory; carries the diagnostics that
// were available at the point of failure.
class PpoNumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainConfig {
  long long total_steps = 1'000'000;
  int horizon = 2048;          // env steps collected per update, across all slots
  int minibatch_size = 64;
  int epochs_per_update = 10;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  double entropy_coef = 0.0;
  double learning_rate = 3e-4;
  double max_grad_norm = 0.5;
  double value_coef = 0.5;
  int num_envs = 4;   // parallel rollout slots (fixed logical layout)
  int workers = 1;    // threads mapped over slots; numerics-neutral
  std::uint64_t seed = 0;
  AdvantageMode advantage_mode = AdvantageMode::kGae;
  bool normalize_advantages = true;
  int checkpoint_interval = 50;  // cycles between periodic checkpoints (0 = final only)

  void validate() const {
    if (total_steps <= 0) throw std::invalid_argument("config: total_steps must be > 0");
    if (horizon <= 0) throw std::invalid_argument("config: horizon must be > 0");
    if (num_envs <= 0) throw std::invalid_argument("config: num_envs must be > 0");
    if (horizon % num_envs != 0)
      throw std::invalid_argument("config: horizon must be divisible by num_envs");
    if (minibatch_size <= 0 || minibatch_size > horizon)
      throw std::invalid_argument("config: minibatch_size must be in [1, horizon]");
    if (epochs_per_update <= 0) throw std::invalid_argument("config: epochs must be > 0");
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("config: gamma must be in [0, 1]");
    if (gae_lambda < 0.0 || gae_lambda > 1.0)
      throw std::invalid_argument("config: gae_lambda must be in [0, 1]");
    if (clip_epsilon <= 0.0) throw std::invalid_argument("config: clip_epsilon must be > 0");
    if (learning_rate <= 0.0) throw std::invalid_argument("config: learning_rate must be > 0");
    if (entropy_coef < 0.0) throw std::invalid_argument("config: entropy_coef must be >= 0");
    if (max_grad_norm < 0.0) throw std::invalid_argument("config: max_grad_norm must be >= 0");
    if (value_coef < 0.0) throw std::invalid_argument("config: value_coef must be >= 0");
    if (workers <= 0) throw std::invalid_argument("config: workers must be > 0");
    if (checkpoint_interval < 0)
      throw std::invalid_argument("config: checkpoint_interval must be >= 0");
  }
};

// One sample's clipped-surrogate contribution and its derivative in the
// ratio. The min() selects the unclipped branch on ties, where both branches
// agree anyway; in the clipped-sign regions the derivative is exactly 0.
struct SurrogateTerm {
  double value = 0.0;
  double d_dr = 0.0;
};

inline SurrogateTerm clipped_surrogate_term(double ratio, double advantage,
                                            double clip_epsilon) {
  const double p1 = ratio * advantage;
  const double p2 = std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon) * advantage;
  if (p1 <= p2) return {p1, advantage};
  return {p2, 0.0};
}

struct Minibatch {
  Eigen::MatrixXd observations;
  Eigen::MatrixXd raw_actions;
  Eigen::VectorXd log_probs_old;
  Eigen::VectorXd returns;
  Eigen::VectorXd advantages;

  int size() const { return static_cast<int>(log_probs_old.size()); }

  static Minibatch gather(const TrainingBatch& b, const std::vector<int>& idx, int from,
                          int count) {
    Minibatch m;
    m.observations.resize(b.observations.rows(), count);
    m.raw_actions.resize(b.raw_actions.rows(), count);
    m.log_probs_old.resize(count);
    m.returns.resize(count);
    m.advantages.resize(count);
    for (int k = 0; k < count; ++k) {
      const int j = idx[static_cast<std::size_t>(from + k)];
      m.observations.col(k) = b.observations.col(j);
      m.raw_actions.col(k) = b.raw_actions.col(j);
      m.log_probs_old[k] = b.log_probs[j];
      m.returns[k] = b.returns[j];
      m.advantages[k] = b.advantages[j];
    }
    return m;
  }
};

struct LossStats {
  double actor_loss = 0.0;   // clipped surrogate including the entropy bonus
  double critic_loss = 0.0;  // mean squared (return - value)
  double total_loss = 0.0;   // actor + value_coef * critic
  double entropy = 0.0;
  double clip_fraction = 0.0;  // fraction of samples with |ratio - 1| > epsilon
  double approx_kl = 0.0;      // mean((ratio - 1) - log ratio)
};

// Losses over one minibatch, plus (optionally) analytic gradients of the
// total loss with respect to every parameter.
//
//   actor:  -mean_j min(r_j A_j, clip(r_j, 1-eps, 1+eps) A_j) - beta * H
//   critic: mean_j (R_j - V_j)^2
//
// r_j = exp(logp_new - logp_old) with densities evaluated at the stored raw
// samples. The log-std clamp acts as a gradient gate: components pinned at a
// bound receive no gradient.
inline LossStats ppo_losses(const ActorCritic& params, const Minibatch& mb,
                            double clip_epsilon, double entropy_coef, double value_coef,
                            AdamOptimizer::GradientSet* grads = nullptr) {
  const int m = mb.size();
  const int d = params.act_dim();
  if (m == 0) throw std::invalid_argument("ppo_losses: empty minibatch");
  const double inv_m = 1.0 / static_cast<double>(m);

  const Eigen::VectorXd ls = clamp_log_std(params.log_std);
  const Eigen::VectorXd inv_sigma = (-ls.array()).exp().matrix();

  Mlp::Cache actor_cache;
  const Eigen::MatrixXd mean =
      params.actor.forward(mb.observations, grads ? &actor_cache : nullptr);
  // z_ij = (raw_ij - mean_ij) / sigma_i
  const Eigen::MatrixXd z =
      ((mb.raw_actions - mean).array().colwise() * inv_sigma.array()).matrix();

  const double log_norm = ls.sum() + 0.5 * static_cast<double>(d) * kLog2Pi;
  Eigen::VectorXd logp(m);
  for (int j = 0; j < m; ++j) {
    logp[j] = -0.5 * z.col(j).squaredNorm() - log_norm;
  }

  const Eigen::VectorXd logratio = logp - mb.log_probs_old;
  const Eigen::VectorXd ratio = logratio.array().exp().matrix();

  double surr_sum = 0.0;
  double clip_count = 0.0;
  double kl_sum = 0.0;
  Eigen::VectorXd d_ratio = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < m; ++j) {
    const double r = ratio[j];
    const SurrogateTerm st = clipped_surrogate_term(r, mb.advantages[j], clip_epsilon);
    surr_sum += st.value;
    d_ratio[j] = -st.d_dr * inv_m;  // d(actor_loss)/d(ratio_j)
    if (std::abs(r - 1.0) > clip_epsilon) clip_count += 1.0;
    kl_sum += (r - 1.0) - logratio[j];
  }

  const double ent = entropy({Eigen::VectorXd::Zero(d), ls});
  LossStats stats;
  stats.entropy = ent;
  stats.actor_loss = -surr_sum * inv_m - entropy_coef * ent;
  stats.clip_fraction = clip_count * inv_m;
  stats.approx_kl = kl_sum * inv_m;

  Mlp::Cache critic_cache;
  const Eigen::MatrixXd v =
      params.critic.forward(mb.observations, grads ? &critic_cache : nullptr);
  const Eigen::VectorXd v_err = v.row(0).transpose() - mb.returns;
  stats.critic_loss = v_err.squaredNorm() * inv_m;
  stats.total_loss = stats.actor_loss + value_coef * stats.critic_loss;

  if (grads) {
    // Through the mean: d logp_j / d mean_ij = z_ij / sigma_i.
    const Eigen::VectorXd d_logp = (d_ratio.array() * ratio.array()).matrix();
    const Eigen::MatrixXd d_mean =
        ((z.array().colwise() * inv_sigma.array()).rowwise() *
         d_logp.transpose().array())
            .matrix();
    grads->actor = params.actor.zero_gradients();
    params.actor.backward(d_mean, actor_cache, grads->actor);

    // Through log-std: d logp_j / d ls_i = z_ij^2 - 1; entropy adds -beta.
    Eigen::VectorXd d_ls = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < m; ++j) {
      if (d_logp[j] != 0.0) {
        d_ls += d_logp[j] * (z.col(j).array().square() - 1.0).matrix();
      }
    }
    d_ls.array() -= entropy_coef;
    // Clamp gate: no gradient for components sitting outside the open interval.
    for (int i = 0; i < d; ++i) {
      if (!(params.log_std[i] > kLogStdMin && params.log_std[i] < kLogStdMax)) d_ls[i] = 0.0;
    }
    grads->log_std = d_ls;

    const Eigen::MatrixXd d_v = (2.0 * value_coef * inv_m) * v_err.transpose();
    grads->critic = params.critic.zero_gradients();
    params.critic.backward(d_v, critic_cache, grads->critic);
  }
  return stats;
}

struct UpdateStats {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  int minibatches = 0;
};

// One PPO update: epochs x shuffled minibatches of Adam steps with global
// gradient-norm clipping. Throws PpoNumericsError on non-finite losses.
inline UpdateStats ppo_update(ActorCritic& params, AdamOptimizer& opt,
                              const TrainingBatch& batch, const TrainConfig& cfg,
                              Rng& shuffle_rng) {
  const int n = batch.size();
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  UpdateStats agg;
  for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
    // Fisher-Yates with the engine-pinned integer draw.
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(shuffle_rng.uniform_int(0, i));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    for (int from = 0; from < n; from += cfg.minibatch_size) {
      const int count = std::min(cfg.minibatch_size, n - from);
      const Minibatch mb = Minibatch::gather(batch, idx, from, count);
      AdamOptimizer::GradientSet grads;
      const LossStats s = ppo_losses(params, mb, cfg.clip_epsilon, cfg.entropy_coef,
                                     cfg.value_coef, &grads);
      if (!std::isfinite(s.total_loss)) {
        throw PpoNumericsError(
            "non-finite loss (actor=" + std::to_string(s.actor_loss) +
            ", critic=" + std::to_string(s.critic_loss) +
            ", approx_kl=" + std::to_string(s.approx_kl) + ")");
      }
      AdamOptimizer::clip_global_norm(grads, cfg.max_grad_norm);
      opt.step(params, grads);
      agg.actor_loss += s.actor_loss;
      agg.critic_loss += s.critic_loss;
      agg.entropy += s.entropy;
      agg.clip_fraction += s.clip_fraction;
      agg.approx_kl += s.approx_kl;
      agg.minibatches += 1;
    }
  }
  const double inv = agg.minibatches > 0 ? 1.0 / agg.minibatches : 0.0;
  agg.actor_loss *= inv;
  agg.critic_loss *= inv;
  agg.entropy *= inv;
  agg.clip_fraction *= inv;
  agg.approx_kl *= inv;
  return agg;
}

// One row of the learning curve, written after every update cycle.
struct CurveRecord {
  long long env_steps = 0;
  long long episodes = 0;
  double episode_reward_mean = 0.0;  // over the trailing 100 finished episodes
  double episode_length_mean = 0.0;
  double clip_fraction = 0.0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
};

// Orchestrates collection across fixed env slots and PPO updates.
//
// Determinism layout: slot i owns env seed derive(seed, 1000+i) and an action
// sampling stream derive(seed, 2000+i); parameter init uses derive(seed, 1)
// and minibatch shuffling derive(seed, 3). The `workers` thread count only
// maps slots onto threads, so results are identical for any worker count.
template <typename EnvT>
class Trainer {
 public:
  Trainer(const typename EnvT::ScenarioType& scenario, const ActionSpace& space,
          const TrainConfig& cfg)
      : cfg_(cfg), space_(space), shuffle_rng_(Rng::derive(cfg.seed, 3)) {
    cfg_.validate();
    for (int i = 0; i < cfg_.num_envs; ++i) {
      slots_.emplace_back(EnvT(scenario, Rng::derive(cfg_.seed, 1000 + i)),
                          Rng(Rng::derive(cfg_.seed, 2000 + i)));
    }
    Rng init_rng(Rng::derive(cfg_.seed, 1));
    params_ = ActorCritic::init(slots_[0].env.observation_dim(),
                                space_.dim(), init_rng);
    opt_ = std::make_unique<AdamOptimizer>(params_, cfg_.learning_rate);
  }

  ActorCritic& params() { return params_; }
  const ActorCritic& params() const { return params_; }
  long long env_steps() const { return env_steps_; }
  long long episodes() const { return episodes_; }

  using CycleCallback = std::function<void(const CurveRecord&, const ActorCritic&)>;

  // Runs ceil(total_steps / horizon) update cycles. The callback fires after
  // every cycle (curve streaming, periodic checkpoints). On a numerics error
  // the last consistent parameters remain readable via params().
  void run(const CycleCallback& callback = nullptr_callback()) {
    const long long cycles =
        (cfg_.total_steps + cfg_.horizon - 1) / cfg_.horizon;
    const int per_slot = cfg_.horizon / cfg_.num_envs;
    std::vector<RolloutBuffer> buffers(static_cast<std::size_t>(cfg_.num_envs));
    for (long long cycle = 0; cycle < cycles; ++cycle) {
      collect_all(buffers, per_slot);
      std::vector<ReturnsAndAdvantages> targets(buffers.size());
      for (std::size_t i = 0; i < buffers.size(); ++i) {
        targets[i] = compute_returns_advantages(buffers[i], cfg_.gamma, cfg_.gae_lambda,
                                                cfg_.advantage_mode);
      }
      const TrainingBatch batch =
          assemble_batch(buffers, targets, cfg_.normalize_advantages);
      const UpdateStats stats = ppo_update(params_, *opt_, batch, cfg_, shuffle_rng_);

      env_steps_ += cfg_.horizon;
      for (const auto& buf : buffers) {
        for (std::size_t k = 0; k < buf.finished_episode_returns.size(); ++k) {
          push_episode(buf.finished_episode_returns[k], buf.finished_episode_lengths[k]);
        }
      }
      CurveRecord rec;
      rec.env_steps = env_steps_;
      rec.episodes = episodes_;
      rec.episode_reward_mean = recent_mean(recent_returns_);
      rec.episode_length_mean = recent_mean(recent_lengths_);
      rec.clip_fraction = stats.clip_fraction;
      rec.actor_loss = stats.actor_loss;
      rec.critic_loss = stats.critic_loss;
      if (callback) callback(rec, params_);
    }
  }

 private:
  struct Slot {
    Slot(EnvT e, Rng r) : env(std::move(e)), policy_rng(r) {}
    EnvT env;
    Rng policy_rng;
  };

  static CycleCallback nullptr_callback() { return CycleCallback(); }

  void collect_all(std::vector<RolloutBuffer>& buffers, int per_slot) {
    const int workers = std::min(cfg_.workers, cfg_.num_envs);
    if (workers <= 1) {
      for (int i = 0; i < cfg_.num_envs; ++i) {
        buffers[static_cast<std::size_t>(i)] = collect_rollout(
            slots_[static_cast<std::size_t>(i)].env, params_, space_, per_slot,
            slots_[static_cast<std::size_t>(i)].policy_rng);
      }
      return;
    }
    // Slot i -> thread i % workers; each thread walks its slots in order.
    // The slot->stream binding is fixed, so the batch is identical to the
    // single-threaded layout.
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([this, &buffers, per_slot, w, workers]() {
        for (int i = w; i < cfg_.num_envs; i += workers) {
          buffers[static_cast<std::size_t>(i)] = collect_rollout(
              slots_[static_cast<std::size_t>(i)].env, params_, space_, per_slot,
              slots_[static_cast<std::size_t>(i)].policy_rng);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  void push_episode(double ret, int len) {
    ++episodes_;
    recent_returns_.push_back(ret);
    recent_lengths_.push_back(static_cast<double>(len));
    if (recent_returns_.size() > 100) recent_returns_.pop_front();
    if (recent_lengths_.size() > 100) recent_lengths_.pop_front();
  }

  static double recent_mean(const std::deque<double>& d) {
    if (d.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  }

  TrainConfig cfg_;
  ActionSpace space_;
  Rng shuffle_rng_;
  std::vector<Slot> slots_;
  ActorCritic params_;
  std::unique_ptr<AdamOptimizer> opt_;
  long long env_steps_ = 0;
  long long episodes_ = 0;
  std::deque<double> recent_returns_;
  std::deque<double> recent_lengths_;
};

}  // namespace uasguide
