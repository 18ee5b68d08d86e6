#include "divexplore/dqn.hpp"

#include "divexplore/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divexplore {

namespace {

std::vector<Activation> mlp_activations(std::size_t hidden_count) {
  std::vector<Activation> acts(hidden_count, Activation::Tanh);
  acts.push_back(Activation::Identity);
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

DqnAgent::DqnAgent(int obs_dim, int n_actions, const DqnConfig& cfg,
                   std::uint64_t seed)
    : cfg_(cfg),
      n_actions_(n_actions),
      online_(mlp_dims(obs_dim, cfg.hidden, n_actions),
              mlp_activations(cfg.hidden.size()), seed),
      target_(online_),
      optimizer_(cfg.optimizer),
      scheduler_(cfg.alpha) {
  if (cfg_.gamma <= 0.0 || cfg_.gamma > 1.0)
    throw std::invalid_argument("dqn: gamma must be in (0, 1]");
  if (cfg_.eps_end > cfg_.eps_start)
    throw std::invalid_argument("dqn: eps_end must be <= eps_start");
  if (cfg_.perf_reactive && cfg_.perf_window <= 0)
    throw std::invalid_argument("dqn: perf_window must be > 0");
  if (cfg_.perf_reactive && cfg_.perf_min >= cfg_.perf_max)
    throw std::invalid_argument("dqn: perf_min must be < perf_max");
}

double DqnAgent::epsilon() const {
  if (cfg_.eps_decay_steps <= 0) return cfg_.eps_end;
  const double frac = std::min(
      1.0, static_cast<double>(env_steps_) / static_cast<double>(cfg_.eps_decay_steps));
  return cfg_.eps_start + frac * (cfg_.eps_end - cfg_.eps_start);
}

Eigen::VectorXd DqnAgent::q_values(const Eigen::VectorXd& obs) const {
  return online_.forward_vec(obs);
}

int DqnAgent::greedy_action(const Eigen::VectorXd& obs) const {
  const Eigen::VectorXd q = q_values(obs);
  int best = 0;
  for (int a = 1; a < n_actions_; ++a)
    if (q(a) > q(best)) best = a;
  return best;
}

int DqnAgent::act(const Eigen::VectorXd& obs, std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon()) {
    std::uniform_int_distribution<int> uniform(0, n_actions_ - 1);
    return uniform(rng);
  }
  return greedy_action(obs);
}

DqnLossResult DqnAgent::dqn_loss(std::span<const Transition* const> batch) const {
  if (batch.empty()) throw std::invalid_argument("dqn_loss: empty batch");
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  const int obs_dim = online_.input_dim();

  Eigen::MatrixXd states(b, obs_dim);
  Eigen::MatrixXd next_states(b, obs_dim);
  for (Eigen::Index i = 0; i < b; ++i) {
    states.row(i) = batch[i]->state.transpose();
    next_states.row(i) = batch[i]->next_state.transpose();
  }

  const ForwardTrace trace = online_.forward_cached(states);
  const Eigen::MatrixXd& q = trace.post.back();
  const Eigen::MatrixXd q_next = target_.forward(next_states);

  Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(b, n_actions_);
  double loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const Transition& t = *batch[i];
    const double target =
        t.done ? t.reward : t.reward + cfg_.gamma * q_next.row(i).maxCoeff();
    const double td = q(i, t.action_index) - target;
    loss += td * td * inv_b;
    dq(i, t.action_index) += 2.0 * td * inv_b;
  }

  DqnLossResult result;
  result.loss = loss;
  result.grads = online_.backward(trace, dq);
  return result;
}

DqnLossResult DqnAgent::div_dqn_loss(std::span<const Transition* const> batch) const {
  if (batch.empty()) throw std::invalid_argument("div_dqn_loss: empty batch");
  for (const Transition* t : batch)
    if (!t->prior_q)
      throw std::invalid_argument("div_dqn_loss: transition has no prior_q");

  const double alpha = scheduler_.alpha() * perf_factor_;
  if (alpha == 0.0) return dqn_loss(batch);

  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  const int obs_dim = online_.input_dim();

  Eigen::MatrixXd states(b, obs_dim);
  Eigen::MatrixXd next_states(b, obs_dim);
  for (Eigen::Index i = 0; i < b; ++i) {
    states.row(i) = batch[i]->state.transpose();
    next_states.row(i) = batch[i]->next_state.transpose();
  }

  const ForwardTrace trace = online_.forward_cached(states);
  const Eigen::MatrixXd& q = trace.post.back();
  const Eigen::MatrixXd q_next = target_.forward(next_states);

  Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(b, n_actions_);
  double loss = 0.0;
  double distance_sum = 0.0;
  const double inv_b = 1.0 / static_cast<double>(b);
  const double c = cfg_.clip_c;

  for (Eigen::Index i = 0; i < b; ++i) {
    const Transition& t = *batch[i];
    const double target =
        t.done ? t.reward : t.reward + cfg_.gamma * q_next.row(i).maxCoeff();
    const double td = q(i, t.action_index) - target;
    loss += td * td * inv_b;
    dq(i, t.action_index) += 2.0 * td * inv_b;

    const Eigen::VectorXd p = softmax(q.row(i).transpose());
    const Eigen::VectorXd p_prior = softmax(*t.prior_q);
    const double kl = kl_divergence(p, p_prior);
    const double clipped = clip_distance(kl, c);
    distance_sum += clipped;
    loss -= alpha * clipped * inv_b;
    if (kl < c) {  // past the clip the diversity term carries no gradient
      for (int j = 0; j < n_actions_; ++j) {
        const double log_ratio = std::log(p(j) / std::max(p_prior(j), 1e-10));
        dq(i, j) -= alpha * inv_b * p(j) * (log_ratio - kl);
      }
    }
  }

  DqnLossResult result;
  result.loss = loss;
  result.grads = online_.backward(trace, dq);
  result.mean_distance = distance_sum * inv_b;
  return result;
}

void DqnAgent::observe_episode_reward(double total_reward) {
  if (!cfg_.perf_reactive) return;
  recent_rewards_.push_back(total_reward);
  while (recent_rewards_.size() > static_cast<std::size_t>(cfg_.perf_window))
    recent_rewards_.pop_front();
  double mean = 0.0;
  for (double r : recent_rewards_) mean += r;
  mean /= static_cast<double>(recent_rewards_.size());
  mean = std::clamp(mean, cfg_.perf_min, cfg_.perf_max);
  perf_factor_ =
      performance_alpha(mean, cfg_.perf_min, cfg_.perf_max, PerformanceMode::Reactive);
}

void DqnAgent::apply_update(const DqnLossResult& result) {
  optimizer_.step(online_, result.grads);
  if (cfg_.diversity) scheduler_.observe_distance(result.mean_distance);
  if (optimizer_.step_count() % cfg_.target_sync_interval == 0) sync_target();
}

EpisodeStats DqnAgent::train_episode(GridWorld& env, ReplayBuffer& replay,
                                     std::mt19937_64& rng, VisitationGrid* visits,
                                     long step_cap) {
  env.reset();
  EpisodeStats stats;
  double loss_sum = 0.0;
  long updates = 0;

  while (true) {
    if (step_cap >= 0 && stats.steps >= step_cap) {
      stats.completed = false;
      break;
    }
    const Eigen::VectorXd obs = env.observation();
    const Eigen::VectorXd q = q_values(obs);
    int action;
    {
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      if (coin(rng) < epsilon()) {
        std::uniform_int_distribution<int> uniform(0, n_actions_ - 1);
        action = uniform(rng);
      } else {
        action = 0;
        for (int a = 1; a < n_actions_; ++a)
          if (q(a) > q(action)) action = a;
      }
    }

    const GridStepResult step = env.step(static_cast<GridAction>(action));
    if (visits) visits->record_visit(step.next.row, step.next.col);

    Transition t;
    t.state = obs;
    t.action_index = action;
    t.reward = step.reward;
    t.next_state = env.observation();
    t.done = step.reward != 0.0;  // horizon cut-offs still bootstrap
    if (cfg_.diversity) t.prior_q = q;
    replay.push(t);

    ++env_steps_;
    ++stats.steps;
    stats.total_reward += step.reward;

    if (env_steps_ >= cfg_.warmup_steps &&
        replay.size() >= static_cast<std::size_t>(cfg_.batch_size) &&
        env_steps_ % cfg_.train_every == 0) {
      const auto batch = replay.sample_uniform(cfg_.batch_size, rng);
      const DqnLossResult result =
          cfg_.diversity ? div_dqn_loss(batch) : dqn_loss(batch);
      apply_update(result);
      scheduler_.advance(env_steps_);
      loss_sum += result.loss;
      ++updates;
    }

    if (step.done) break;
  }

  if (stats.completed) observe_episode_reward(stats.total_reward);
  stats.mean_loss = updates > 0 ? loss_sum / static_cast<double>(updates) : 0.0;
  stats.alpha = scheduler_.alpha() * perf_factor_;
  return stats;
}

}  // namespace divexplore
