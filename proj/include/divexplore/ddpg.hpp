#pragma once

#include "divexplore/metrics.hpp"
#include "divexplore/mlp.hpp"
#include "divexplore/optimizer.hpp"
#include "divexplore/pointmass.hpp"
#include "divexplore/replay.hpp"
#include "divexplore/scaling.hpp"

#include <random>
#include <span>
#include <vector>

namespace divexplore {

enum class NoiseKind { Ou, Gaussian };

struct DdpgConfig {
  std::vector<int> actor_hidden = {64, 64};
  std::vector<int> critic_hidden = {64, 64};
  OptimizerConfig actor_optimizer{OptimizerKind::Adam, 1e-4};
  OptimizerConfig critic_optimizer{OptimizerKind::Adam, 1e-3};
  double gamma = 0.99;
  double tau = 0.005;
  NoiseKind noise = NoiseKind::Ou;
  double ou_theta = 0.15;
  double ou_sigma = 0.2;
  double gaussian_sigma = 0.1;
  int batch_size = 64;
  long warmup_steps = 500;
  int train_every = 1;
  bool diversity = false;  // diversity variant acts noise-free
  AlphaSchedulerConfig alpha;
  double clip_c = 10.0;
};

struct DdpgLossResult {
  double loss = 0.0;
  Gradients grads;
  double mean_distance = 0.0;  // mean clipped MSE over the batch (diversity only)
};

struct EpisodeStats;  // from dqn.hpp; shared stats shape
struct DdpgEpisodeStats {
  double total_reward = 0.0;
  long steps = 0;
  double mean_critic_loss = 0.0;
  double mean_actor_loss = 0.0;
  double alpha = 0.0;
  bool completed = true;
};

/// One discrete-time Ornstein-Uhlenbeck step toward zero mean:
/// x + theta * (0 - x) + sigma * N(0, 1) per dimension.
Eigen::VectorXd ou_noise_step(const Eigen::VectorXd& state, double theta,
                              double sigma, std::mt19937_64& rng);

/// Deterministic-actor / Q-critic pair with target copies, plus the
/// diversity variant that subtracts a clipped MSE between the current action
/// and the replayed prior action from the actor loss.
class DdpgAgent {
 public:
  DdpgAgent(int obs_dim, int act_dim, double action_bound, const DdpgConfig& cfg,
            std::uint64_t seed);

  const DdpgConfig& config() const { return cfg_; }
  Mlp& actor() { return actor_; }
  const Mlp& actor() const { return actor_; }
  Mlp& critic() { return critic_; }
  const Mlp& critic() const { return critic_; }
  Mlp& target_actor() { return target_actor_; }
  Mlp& target_critic() { return target_critic_; }
  double action_bound() const { return action_bound_; }
  AlphaScheduler& alpha_scheduler() { return scheduler_; }

  /// Bounded policy output: action_bound * tanh-headed actor net.
  Eigen::VectorXd policy_action(const Eigen::VectorXd& obs) const;

  DdpgLossResult critic_loss(std::span<const Transition* const> batch) const;
  DdpgLossResult actor_loss(std::span<const Transition* const> batch) const;
  DdpgLossResult div_actor_loss(std::span<const Transition* const> batch) const;

  /// Polyak averaging: target <- tau * online + (1 - tau) * target.
  void soft_update();

  DdpgEpisodeStats train_episode(PointMass& env, ReplayBuffer& replay,
                                 std::mt19937_64& rng, long step_cap = -1);

 private:
  Eigen::MatrixXd critic_input(const Eigen::MatrixXd& states,
                               const Eigen::MatrixXd& actions) const;

  DdpgConfig cfg_;
  int obs_dim_;
  int act_dim_;
  double action_bound_;
  Mlp actor_;
  Mlp critic_;
  Mlp target_actor_;
  Mlp target_critic_;
  Optimizer actor_optimizer_;
  Optimizer critic_optimizer_;
  AlphaScheduler scheduler_;
  Eigen::VectorXd noise_state_;
  long env_steps_ = 0;
};

}  // namespace divexplore
