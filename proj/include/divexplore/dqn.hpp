#pragma once

#include "divexplore/gridworld.hpp"
#include "divexplore/metrics.hpp"
#include "divexplore/mlp.hpp"
#include "divexplore/optimizer.hpp"
#include "divexplore/replay.hpp"
#include "divexplore/scaling.hpp"

#include <deque>
#include <random>
#include <span>
#include <vector>

namespace divexplore {

struct DqnConfig {
  std::vector<int> hidden = {64, 64};
  OptimizerConfig optimizer;
  double gamma = 0.99;
  double eps_start = 1.0;
  double eps_end = 0.05;
  long eps_decay_steps = 20000;
  int batch_size = 32;
  long target_sync_interval = 500;  // in optimizer steps
  long warmup_steps = 500;          // env steps before training starts
  int train_every = 1;              // env steps between optimizer steps
  bool diversity = false;
  AlphaSchedulerConfig alpha;
  double clip_c = 10.0;
  // Reactive performance scaling: the scheduler alpha is further multiplied
  // by 1 - (trailing mean episode reward, normalized to [perf_min, perf_max]).
  // Sustained success winds the diversity pressure down on its own, letting
  // the value function hold a found goal, and a performance collapse winds
  // the pressure back up.
  bool perf_reactive = false;
  double perf_min = 0.0;
  double perf_max = 1.0;
  int perf_window = 10;
};

struct EpisodeStats {
  double total_reward = 0.0;
  long steps = 0;
  double mean_loss = 0.0;
  double alpha = 0.0;
  bool completed = true;  // false when cut off by the step budget
};

struct DqnLossResult {
  double loss = 0.0;
  Gradients grads;
  double mean_distance = 0.0;  // mean clipped KL over the batch (diversity only)
};

/// Q-learning with a target network, plus the diversity variant that
/// subtracts a clipped KL between the current and the stored softmax
/// policies from the TD loss.
class DqnAgent {
 public:
  DqnAgent(int obs_dim, int n_actions, const DqnConfig& cfg, std::uint64_t seed);

  const DqnConfig& config() const { return cfg_; }
  Mlp& online_net() { return online_; }
  const Mlp& online_net() const { return online_; }
  const Mlp& target_net() const { return target_; }
  Mlp& target_net() { return target_; }
  AlphaScheduler& alpha_scheduler() { return scheduler_; }
  long env_steps() const { return env_steps_; }

  /// Record a finished episode's total reward for reactive performance
  /// scaling; updates perf_factor(). No-op unless perf_reactive is set.
  void observe_episode_reward(double total_reward);
  /// Multiplier applied to the scheduler alpha (1.0 when scaling is off).
  double perf_factor() const { return perf_factor_; }

  double epsilon() const;

  /// Epsilon-greedy over the online Q-values; greedy ties break to the
  /// lowest action index.
  int act(const Eigen::VectorXd& obs, std::mt19937_64& rng) const;
  int greedy_action(const Eigen::VectorXd& obs) const;
  Eigen::VectorXd q_values(const Eigen::VectorXd& obs) const;

  DqnLossResult dqn_loss(std::span<const Transition* const> batch) const;
  DqnLossResult div_dqn_loss(std::span<const Transition* const> batch) const;

  void sync_target() { target_ = online_; }

  /// One episode of the standard loop: act, store (with prior_q snapshot for
  /// the diversity variant), sample, update, periodic target sync.
  /// step_cap > 0 truncates the episode once the run budget is exhausted.
  EpisodeStats train_episode(GridWorld& env, ReplayBuffer& replay,
                             std::mt19937_64& rng, VisitationGrid* visits = nullptr,
                             long step_cap = -1);

 private:
  void apply_update(const DqnLossResult& result);

  DqnConfig cfg_;
  int n_actions_;
  Mlp online_;
  Mlp target_;
  Optimizer optimizer_;
  AlphaScheduler scheduler_;
  long env_steps_ = 0;
  std::deque<double> recent_rewards_;
  double perf_factor_ = 1.0;
};

}  // namespace divexplore
