#pragma once

#include "divexplore/gridworld.hpp"
#include "divexplore/metrics.hpp"
#include "divexplore/mlp.hpp"
#include "divexplore/optimizer.hpp"
#include "divexplore/scaling.hpp"

#include <deque>
#include <random>
#include <vector>

namespace divexplore {

enum class A2cDivMode { Off, Proactive, Reactive };

struct A2cConfig {
  std::vector<int> hidden = {64, 64};
  OptimizerConfig optimizer{OptimizerKind::Adam, 7e-4};
  double gamma = 0.99;
  double entropy_beta = 0.01;
  double value_coef = 0.5;
  int workers = 4;
  int rollout_len = 5;
  A2cDivMode div_mode = A2cDivMode::Off;
  int snapshot_every = 20;         // policy updates between snapshots
  int snapshot_ring = 5;
  int snapshot_eval_episodes = 5;  // greedy episodes behind P(pi')
  AlphaSchedulerConfig alpha;
  double clip_c = 10.0;
};

/// Frozen policy parameters plus the mean greedy return measured when the
/// snapshot was taken.
struct PolicySnapshot {
  Mlp policy;
  double performance = 0.0;
  long step = 0;
};

/// τ: one synchronous rollout across all workers, flattened worker-major
/// per timestep, with bootstrapped n-step returns.
struct RolloutBatch {
  Eigen::MatrixXd obs;          // B x obs_dim, B = workers * rollout_len
  std::vector<int> actions;
  Eigen::VectorXd rewards;
  std::vector<char> dones;
  Eigen::VectorXd returns;      // G_t
  std::vector<double> finished_episode_rewards;
  std::vector<long> finished_episode_steps;
};

struct A2cLossResult {
  double loss = 0.0;
  Gradients policy_grads;
  Gradients value_grads;
  double mean_distance = 0.0;  // mean clipped KL over batch x ring (diversity only)
};

struct A2cTrainStats {
  long env_steps = 0;
  long updates = 0;
  double final_alpha = 0.0;
};

/// Synchronous advantage actor-critic over parallel gridworld instances,
/// with an optional diversity term against a ring of recent policy
/// snapshots whose weights are scaled by snapshot performance.
class A2cAgent {
 public:
  A2cAgent(int obs_dim, int n_actions, const A2cConfig& cfg, std::uint64_t seed);

  const A2cConfig& config() const { return cfg_; }
  Mlp& policy_net() { return policy_; }
  const Mlp& policy_net() const { return policy_; }
  Mlp& value_net() { return value_; }
  const std::deque<PolicySnapshot>& snapshot_ring() const { return ring_; }
  AlphaScheduler& alpha_scheduler() { return scheduler_; }

  Eigen::VectorXd action_probabilities(const Eigen::VectorXd& obs) const;
  int sample_action(const Eigen::VectorXd& obs, std::mt19937_64& rng) const;
  int greedy_action(const Eigen::VectorXd& obs) const;

  /// Steps every worker env `rollout_len` times in a fixed order.
  RolloutBatch rollout(std::vector<GridWorld>& envs, std::mt19937_64& rng,
                       VisitationGrid* visits = nullptr);

  A2cLossResult a2c_loss(const RolloutBatch& batch) const;
  A2cLossResult div_a2c_loss(const RolloutBatch& batch) const;

  /// Freezes the current policy, measures its mean greedy return over
  /// snapshot_eval_episodes fresh episodes, and pushes it onto the ring.
  void snapshot_policy(const GridWorldConfig& eval_cfg);

  /// Pushes an externally built snapshot (checkpoint restore, tests);
  /// evicts the oldest entry past the ring size.
  void push_snapshot(const Mlp& policy, double performance);

  /// Runs rollout/update cycles until total_steps env steps have been
  /// consumed. Completed episodes are appended to `log` in completion order.
  A2cTrainStats train(const GridWorldConfig& env_cfg, long total_steps,
                      std::mt19937_64& rng, RewardLog* log = nullptr,
                      VisitationGrid* visits = nullptr);

 private:
  double evaluate_policy(const Mlp& policy, const GridWorldConfig& cfg, int episodes) const;

  A2cConfig cfg_;
  int n_actions_;
  Mlp policy_;
  Mlp value_;
  Optimizer policy_optimizer_;
  Optimizer value_optimizer_;
  std::deque<PolicySnapshot> ring_;
  AlphaScheduler scheduler_;
  long updates_ = 0;
  long env_steps_ = 0;

  // rollout bookkeeping carried across calls
  std::vector<double> worker_episode_reward_;
  std::vector<long> worker_episode_steps_;
};

}  // namespace divexplore
