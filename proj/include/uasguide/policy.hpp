#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "uasguide/geometry.hpp"
#include "uasguide/mlp.hpp"
#include "uasguide/rng.hpp"
#include "uasguide/scenario.hpp"

namespace uasguide {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Physical action bounds per dimension. The policy acts in a normalized
// [-1, 1] space; samples are clamped then mapped affinely onto these bounds.
struct ActionSpace {
  Eigen::VectorXd low;
  Eigen::VectorXd high;

  int dim() const { return static_cast<int>(low.size()); }

  Eigen::VectorXd to_physical(const Eigen::VectorXd& raw) const {
    Eigen::VectorXd out(low.size());
    for (Eigen::Index i = 0; i < low.size(); ++i) {
      const double c = std::clamp(raw[i], -1.0, 1.0);
      out[i] = low[i] + (c + 1.0) * 0.5 * (high[i] - low[i]);
    }
    return out;
  }
};

// Heading-change-only control: +/- 30 degrees.
inline ActionSpace static_action_space() {
  ActionSpace s;
  s.low = Eigen::VectorXd::Constant(1, -kMaxHeadingChange);
  s.high = Eigen::VectorXd::Constant(1, kMaxHeadingChange);
  return s;
}

// Moving task: heading change, plus commanded speed (m-equivalents/s) in
// heading+speed mode.
inline ActionSpace moving_action_space(const MovingScenario& sc) {
  if (sc.control_mode == ControlMode::kHeadingOnly) return static_action_space();
  ActionSpace s;
  s.low = Eigen::VectorXd(2);
  s.high = Eigen::VectorXd(2);
  s.low << -kMaxHeadingChange, 0.0;
  s.high << kMaxHeadingChange, sc.max_speed * sc.world_unit_m;
  return s;
}

inline ActionSpace action_space_for(const Scenario& sc) {
  if (const auto* m = std::get_if<MovingScenario>(&sc)) return moving_action_space(*m);
  return static_action_space();
}

// Diagonal Gaussian over the normalized action space.
struct ActionDistribution {
  Eigen::VectorXd mean;
  Eigen::VectorXd log_std;  // already clamped to [kLogStdMin, kLogStdMax]
};

inline Eigen::VectorXd clamp_log_std(const Eigen::VectorXd& raw) {
  return raw.array().max(kLogStdMin).min(kLogStdMax).matrix();
}

inline Eigen::VectorXd sample_raw(const ActionDistribution& d, Rng& rng) {
  Eigen::VectorXd out(d.mean.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = d.mean[i] + std::exp(d.log_std[i]) * rng.normal();
  }
  return out;
}

// Log-density of the raw (pre-clamp) sample under the diagonal Gaussian.
inline double log_prob(const ActionDistribution& d, const Eigen::VectorXd& raw) {
  double lp = 0.0;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double z = (raw[i] - d.mean[i]) / std::exp(d.log_std[i]);
    lp += -0.5 * z * z - d.log_std[i] - 0.5 * kLog2Pi;
  }
  return lp;
}

// Differential entropy; depends only on the (state-independent) log-std.
inline double entropy(const ActionDistribution& d) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < d.log_std.size(); ++i) {
    h += d.log_std[i] + 0.5 * (kLog2Pi + 1.0);
  }
  return h;
}

// Actor-critic parameter bundle: separate 2x64 tanh networks plus a learnable
// state-independent log-std vector.
struct ActorCritic {
  Mlp actor;
  Mlp critic;
  Eigen::VectorXd log_std;

  static ActorCritic init(int obs_dim, int act_dim, Rng& rng,
                          std::vector<int> hidden = {64, 64}) {
    ActorCritic p;
    const double kHiddenGain = std::sqrt(2.0);
    p.actor = Mlp::orthogonal_init(obs_dim, hidden, act_dim, rng, kHiddenGain, 0.01);
    p.critic = Mlp::orthogonal_init(obs_dim, hidden, 1, rng, kHiddenGain, 1.0);
    p.log_std = Eigen::VectorXd::Zero(act_dim);
    return p;
  }

  int obs_dim() const { return actor.input_dim(); }
  int act_dim() const { return actor.output_dim(); }

  ActionDistribution action_distribution(const Eigen::VectorXd& obs) const {
    return {actor.forward(obs), clamp_log_std(log_std)};
  }

  double value(const Eigen::VectorXd& obs) const { return critic.forward(obs)[0]; }
};

// Adam over the full parameter set (actor, critic, log-std), with first/second
// moment state mirroring every tensor.
class AdamOptimizer {
 public:
  AdamOptimizer(const ActorCritic& params, double lr, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    m_actor_ = params.actor.zero_gradients();
    v_actor_ = params.actor.zero_gradients();
    m_critic_ = params.critic.zero_gradients();
    v_critic_ = params.critic.zero_gradients();
    m_log_std_ = Eigen::VectorXd::Zero(params.log_std.size());
    v_log_std_ = Eigen::VectorXd::Zero(params.log_std.size());
  }

  struct GradientSet {
    Mlp::Gradients actor;
    Mlp::Gradients critic;
    Eigen::VectorXd log_std;
  };

  // Global L2 norm across every gradient tensor.
  static double global_norm(const GradientSet& g) {
    double sq = 0.0;
    for (const auto& m : g.actor.w) sq += m.squaredNorm();
    for (const auto& v : g.actor.b) sq += v.squaredNorm();
    for (const auto& m : g.critic.w) sq += m.squaredNorm();
    for (const auto& v : g.critic.b) sq += v.squaredNorm();
    sq += g.log_std.squaredNorm();
    return std::sqrt(sq);
  }

  // Scales the whole set so its global norm is at most `max_norm`.
  static double clip_global_norm(GradientSet& g, double max_norm) {
    const double norm = global_norm(g);
    if (max_norm > 0.0 && norm > max_norm) {
      const double scale = max_norm / norm;
      for (auto& m : g.actor.w) m *= scale;
      for (auto& v : g.actor.b) v *= scale;
      for (auto& m : g.critic.w) m *= scale;
      for (auto& v : g.critic.b) v *= scale;
      g.log_std *= scale;
    }
    return norm;
  }

  void step(ActorCritic& params, const GradientSet& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t l = 0; l < params.actor.weights.size(); ++l) {
      update(params.actor.weights[l], grads.actor.w[l], m_actor_.w[l], v_actor_.w[l], bc1, bc2);
      update(params.actor.biases[l], grads.actor.b[l], m_actor_.b[l], v_actor_.b[l], bc1, bc2);
    }
    for (std::size_t l = 0; l < params.critic.weights.size(); ++l) {
      update(params.critic.weights[l], grads.critic.w[l], m_critic_.w[l], v_critic_.w[l], bc1,
             bc2);
      update(params.critic.biases[l], grads.critic.b[l], m_critic_.b[l], v_critic_.b[l], bc1,
             bc2);
    }
    update(params.log_std, grads.log_std, m_log_std_, v_log_std_, bc1, bc2);
  }

  long long steps_taken() const { return t_; }
  double learning_rate() const { return lr_; }

 private:
  template <typename T>
  void update(T& p, const T& g, T& m, T& v, double bc1, double bc2) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = (beta2_ * v.array() + (1.0 - beta2_) * g.array().square()).matrix();
    p = (p.array() - lr_ * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps_)).matrix();
  }

  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
  Mlp::Gradients m_actor_, v_actor_, m_critic_, v_critic_;
  Eigen::VectorXd m_log_std_, v_log_std_;
};

}  // namespace uasguide
