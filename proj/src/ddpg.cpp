#include "divexplore/ddpg.hpp"

#include "divexplore/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace divexplore {

namespace {

std::vector<Activation> hidden_tanh_then(Activation head, std::size_t hidden_count) {
  std::vector<Activation> acts(hidden_count, Activation::Tanh);
  acts.push_back(head);
  return acts;
}

std::vector<int> mlp_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims;
  dims.push_back(in);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

}  // namespace

Eigen::VectorXd ou_noise_step(const Eigen::VectorXd& state, double theta,
                              double sigma, std::mt19937_64& rng) {
  if (!state.allFinite()) throw std::invalid_argument("ou_noise_step: non-finite state");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd next(state.size());
  for (Eigen::Index i = 0; i < state.size(); ++i)
    next(i) = state(i) + theta * (0.0 - state(i)) + sigma * gauss(rng);
  return next;
}

DdpgAgent::DdpgAgent(int obs_dim, int act_dim, double action_bound,
                     const DdpgConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      obs_dim_(obs_dim),
      act_dim_(act_dim),
      action_bound_(action_bound),
      actor_(mlp_dims(obs_dim, cfg.actor_hidden, act_dim),
             hidden_tanh_then(Activation::Tanh, cfg.actor_hidden.size()), seed),
      critic_(mlp_dims(obs_dim + act_dim, cfg.critic_hidden, 1),
              hidden_tanh_then(Activation::Identity, cfg.critic_hidden.size()),
              seed ^ 0x9e3779b97f4a7c15ULL),
      target_actor_(actor_),
      target_critic_(critic_),
      actor_optimizer_(cfg.actor_optimizer),
      critic_optimizer_(cfg.critic_optimizer),
      scheduler_(cfg.alpha),
      noise_state_(Eigen::VectorXd::Zero(act_dim)) {
  if (action_bound <= 0.0) throw std::invalid_argument("ddpg: action bound must be > 0");
}

Eigen::VectorXd DdpgAgent::policy_action(const Eigen::VectorXd& obs) const {
  return action_bound_ * actor_.forward_vec(obs);
}

Eigen::MatrixXd DdpgAgent::critic_input(const Eigen::MatrixXd& states,
                                        const Eigen::MatrixXd& actions) const {
  Eigen::MatrixXd input(states.rows(), obs_dim_ + act_dim_);
  input << states, actions;
  return input;
}

DdpgLossResult DdpgAgent::critic_loss(std::span<const Transition* const> batch) const {
  if (batch.empty()) throw std::invalid_argument("critic_loss: empty batch");
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());

  Eigen::MatrixXd states(b, obs_dim_);
  Eigen::MatrixXd actions(b, act_dim_);
  Eigen::MatrixXd next_states(b, obs_dim_);
  for (Eigen::Index i = 0; i < b; ++i) {
    states.row(i) = batch[i]->state.transpose();
    actions.row(i) = batch[i]->action_vec.transpose();
    next_states.row(i) = batch[i]->next_state.transpose();
  }

  // TD target from the target actor/critic pair.
  const Eigen::MatrixXd next_actions =
      action_bound_ * target_actor_.forward(next_states);
  const Eigen::MatrixXd q_next =
      target_critic_.forward(critic_input(next_states, next_actions));

  const ForwardTrace trace = critic_.forward_cached(critic_input(states, actions));
  const Eigen::MatrixXd& q = trace.post.back();

  Eigen::MatrixXd dq(b, 1);
  double loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const Transition& t = *batch[i];
    const double y = t.done ? t.reward : t.reward + cfg_.gamma * q_next(i, 0);
    const double td = q(i, 0) - y;
    loss += td * td * inv_b;
    dq(i, 0) = 2.0 * td * inv_b;
  }

  DdpgLossResult result;
  result.loss = loss;
  result.grads = critic_.backward(trace, dq);
  return result;
}

DdpgLossResult DdpgAgent::actor_loss(std::span<const Transition* const> batch) const {
  if (batch.empty()) throw std::invalid_argument("actor_loss: empty batch");
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());

  Eigen::MatrixXd states(b, obs_dim_);
  for (Eigen::Index i = 0; i < b; ++i) states.row(i) = batch[i]->state.transpose();

  const ForwardTrace actor_trace = actor_.forward_cached(states);
  const Eigen::MatrixXd actions = action_bound_ * actor_trace.post.back();

  const ForwardTrace critic_trace =
      critic_.forward_cached(critic_input(states, actions));
  const double inv_b = 1.0 / static_cast<double>(b);
  const double loss = -critic_trace.post.back().col(0).sum() * inv_b;

  // dL/dQ = -1/b per row; pull dL/d(action) out through the critic input.
  Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(b, 1, -inv_b);
  Eigen::MatrixXd dinput;
  critic_.backward(critic_trace, dq, &dinput);  // critic grads discarded
  const Eigen::MatrixXd dactions = dinput.rightCols(act_dim_);

  DdpgLossResult result;
  result.loss = loss;
  result.grads = actor_.backward(actor_trace, action_bound_ * dactions);
  return result;
}

DdpgLossResult DdpgAgent::div_actor_loss(std::span<const Transition* const> batch) const {
  const double alpha = scheduler_.alpha();
  if (alpha == 0.0) return actor_loss(batch);
  if (batch.empty()) throw std::invalid_argument("div_actor_loss: empty batch");
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());

  Eigen::MatrixXd states(b, obs_dim_);
  Eigen::MatrixXd prior_actions(b, act_dim_);
  for (Eigen::Index i = 0; i < b; ++i) {
    states.row(i) = batch[i]->state.transpose();
    if (batch[i]->action_vec.size() != act_dim_)
      throw std::invalid_argument("div_actor_loss: transition has no stored action");
    prior_actions.row(i) = batch[i]->action_vec.transpose();
  }

  const ForwardTrace actor_trace = actor_.forward_cached(states);
  const Eigen::MatrixXd actions = action_bound_ * actor_trace.post.back();

  const ForwardTrace critic_trace =
      critic_.forward_cached(critic_input(states, actions));
  const double inv_b = 1.0 / static_cast<double>(b);
  double loss = -critic_trace.post.back().col(0).sum() * inv_b;

  Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(b, 1, -inv_b);
  Eigen::MatrixXd dinput;
  critic_.backward(critic_trace, dq, &dinput);
  Eigen::MatrixXd dactions = dinput.rightCols(act_dim_);

  double distance_sum = 0.0;
  const double c = cfg_.clip_c;
  for (Eigen::Index i = 0; i < b; ++i) {
    const Eigen::VectorXd diff =
        (actions.row(i) - prior_actions.row(i)).transpose();
    const double d = diff.squaredNorm() / static_cast<double>(act_dim_);
    const double clipped = clip_distance(d, c);
    distance_sum += clipped;
    loss -= alpha * clipped * inv_b;
    if (d < c) {
      dactions.row(i) -=
          (alpha * inv_b * 2.0 / static_cast<double>(act_dim_)) * diff.transpose();
    }
  }

  DdpgLossResult result;
  result.loss = loss;
  result.grads = actor_.backward(actor_trace, action_bound_ * dactions);
  result.mean_distance = distance_sum * inv_b;
  return result;
}

void DdpgAgent::soft_update() {
  const double tau = cfg_.tau;
  auto blend = [tau](Mlp& target, const Mlp& online) {
    auto& tl = target.layers();
    const auto& ol = online.layers();
    for (std::size_t k = 0; k < tl.size(); ++k) {
      tl[k].weight = tau * ol[k].weight + (1.0 - tau) * tl[k].weight;
      tl[k].bias = tau * ol[k].bias + (1.0 - tau) * tl[k].bias;
    }
  };
  blend(target_actor_, actor_);
  blend(target_critic_, critic_);
}

DdpgEpisodeStats DdpgAgent::train_episode(PointMass& env, ReplayBuffer& replay,
                                          std::mt19937_64& rng, long step_cap) {
  env.reset();
  noise_state_.setZero();
  DdpgEpisodeStats stats;
  double critic_loss_sum = 0.0;
  double actor_loss_sum = 0.0;
  long updates = 0;

  while (true) {
    if (step_cap >= 0 && stats.steps >= step_cap) {
      stats.completed = false;
      break;
    }
    const Eigen::VectorXd obs = env.observation();
    Eigen::VectorXd action = policy_action(obs);
    if (!cfg_.diversity) {
      if (cfg_.noise == NoiseKind::Ou) {
        noise_state_ = ou_noise_step(noise_state_, cfg_.ou_theta, cfg_.ou_sigma, rng);
        action += noise_state_;
      } else {
        std::normal_distribution<double> gauss(0.0, cfg_.gaussian_sigma);
        for (Eigen::Index i = 0; i < action.size(); ++i) action(i) += gauss(rng);
      }
      action = action.cwiseMax(-action_bound_).cwiseMin(action_bound_);
    }

    const PointMassStepResult step = env.step(action.head<2>());

    Transition t;
    t.state = obs;
    t.action_vec = action;
    t.reward = step.reward;
    t.next_state = env.observation();
    t.done = step.reward != 0.0;  // horizon cut-offs still bootstrap
    replay.push(t);

    ++env_steps_;
    ++stats.steps;
    stats.total_reward += step.reward;

    if (env_steps_ >= cfg_.warmup_steps &&
        replay.size() >= static_cast<std::size_t>(cfg_.batch_size) &&
        env_steps_ % cfg_.train_every == 0) {
      const auto batch = replay.sample_uniform(cfg_.batch_size, rng);
      const DdpgLossResult critic_result = critic_loss(batch);
      critic_optimizer_.step(critic_, critic_result.grads);
      const DdpgLossResult actor_result =
          cfg_.diversity ? div_actor_loss(batch) : actor_loss(batch);
      actor_optimizer_.step(actor_, actor_result.grads);
      soft_update();
      if (cfg_.diversity) scheduler_.observe_distance(actor_result.mean_distance);
      scheduler_.advance(env_steps_);
      critic_loss_sum += critic_result.loss;
      actor_loss_sum += actor_result.loss;
      ++updates;
    }

    if (step.done) break;
  }

  if (updates > 0) {
    stats.mean_critic_loss = critic_loss_sum / static_cast<double>(updates);
    stats.mean_actor_loss = actor_loss_sum / static_cast<double>(updates);
  }
  stats.alpha = scheduler_.alpha();
  return stats;
}

}  // namespace divexplore
