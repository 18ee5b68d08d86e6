#include "divexplore/a2c.hpp"

#include "divexplore/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace divexplore {

namespace {

std::vector<Activation> hidden_tanh_then_identity(std::size_t hidden_count) {
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

int sample_categorical(const Eigen::VectorXd& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  double u = coin(rng);
  for (Eigen::Index a = 0; a < probs.size(); ++a) {
    u -= probs(a);
    if (u <= 0.0) return static_cast<int>(a);
  }
  return static_cast<int>(probs.size() - 1);
}

}  // namespace

A2cAgent::A2cAgent(int obs_dim, int n_actions, const A2cConfig& cfg,
                   std::uint64_t seed)
    : cfg_(cfg),
      n_actions_(n_actions),
      policy_(mlp_dims(obs_dim, cfg.hidden, n_actions),
              hidden_tanh_then_identity(cfg.hidden.size()), seed),
      value_(mlp_dims(obs_dim, cfg.hidden, 1),
             hidden_tanh_then_identity(cfg.hidden.size()),
             seed ^ 0x9e3779b97f4a7c15ULL),
      policy_optimizer_(cfg.optimizer),
      value_optimizer_(cfg.optimizer),
      scheduler_(cfg.alpha) {
  if (cfg_.workers < 1) throw std::invalid_argument("a2c: workers must be >= 1");
  if (cfg_.rollout_len < 1) throw std::invalid_argument("a2c: rollout_len must be >= 1");
  if (cfg_.entropy_beta < 0.0) throw std::invalid_argument("a2c: entropy beta must be >= 0");
}

Eigen::VectorXd A2cAgent::action_probabilities(const Eigen::VectorXd& obs) const {
  return softmax(policy_.forward_vec(obs));
}

int A2cAgent::sample_action(const Eigen::VectorXd& obs, std::mt19937_64& rng) const {
  return sample_categorical(action_probabilities(obs), rng);
}

int A2cAgent::greedy_action(const Eigen::VectorXd& obs) const {
  const Eigen::VectorXd logits = policy_.forward_vec(obs);
  int best = 0;
  for (int a = 1; a < n_actions_; ++a)
    if (logits(a) > logits(best)) best = a;
  return best;
}

RolloutBatch A2cAgent::rollout(std::vector<GridWorld>& envs, std::mt19937_64& rng,
                               VisitationGrid* visits) {
  const int workers = static_cast<int>(envs.size());
  if (workers < 1) throw std::invalid_argument("rollout: no worker envs");
  const int steps = cfg_.rollout_len;
  const Eigen::Index b = static_cast<Eigen::Index>(workers) * steps;

  if (worker_episode_reward_.size() != static_cast<std::size_t>(workers)) {
    worker_episode_reward_.assign(workers, 0.0);
    worker_episode_steps_.assign(workers, 0);
  }

  RolloutBatch batch;
  batch.obs.resize(b, policy_.input_dim());
  batch.actions.resize(b);
  batch.rewards.resize(b);
  batch.dones.resize(b);
  batch.returns.resize(b);

  // Worker-major within each timestep keeps the flattened index t*W + w.
  for (int t = 0; t < steps; ++t) {
    for (int w = 0; w < workers; ++w) {
      const Eigen::Index i = static_cast<Eigen::Index>(t) * workers + w;
      const Eigen::VectorXd obs = envs[w].observation();
      const int action = sample_action(obs, rng);
      const GridStepResult step = envs[w].step(static_cast<GridAction>(action));
      if (visits) visits->record_visit(step.next.row, step.next.col);

      batch.obs.row(i) = obs.transpose();
      batch.actions[i] = action;
      batch.rewards(i) = step.reward;
      batch.dones[i] = step.done ? 1 : 0;

      worker_episode_reward_[w] += step.reward;
      worker_episode_steps_[w] += 1;
      if (step.done) {
        batch.finished_episode_rewards.push_back(worker_episode_reward_[w]);
        batch.finished_episode_steps.push_back(worker_episode_steps_[w]);
        worker_episode_reward_[w] = 0.0;
        worker_episode_steps_[w] = 0;
        envs[w].reset();
      }
    }
  }

  // Bootstrapped n-step returns, computed backward per worker.
  for (int w = 0; w < workers; ++w) {
    const Eigen::Index last = static_cast<Eigen::Index>(steps - 1) * workers + w;
    double running = batch.dones[last]
        ? 0.0 : value_.forward_vec(envs[w].observation())(0);
    for (int t = steps - 1; t >= 0; --t) {
      const Eigen::Index i = static_cast<Eigen::Index>(t) * workers + w;
      if (batch.dones[i]) running = 0.0;  // G = r on done
      running = batch.rewards(i) + cfg_.gamma * running;
      batch.returns(i) = running;
    }
  }

  env_steps_ += b;
  return batch;
}

A2cLossResult A2cAgent::a2c_loss(const RolloutBatch& batch) const {
  const Eigen::Index b = batch.obs.rows();
  if (b == 0) throw std::invalid_argument("a2c_loss: empty batch");
  const double inv_b = 1.0 / static_cast<double>(b);

  const ForwardTrace policy_trace = policy_.forward_cached(batch.obs);
  const Eigen::MatrixXd probs = softmax_rows(policy_trace.post.back());
  const ForwardTrace value_trace = value_.forward_cached(batch.obs);
  const Eigen::MatrixXd& values = value_trace.post.back();

  double loss = 0.0;
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(b, n_actions_);
  Eigen::MatrixXd dvalues(b, 1);

  for (Eigen::Index i = 0; i < b; ++i) {
    const int a = batch.actions[i];
    const double advantage = batch.returns(i) - values(i, 0);  // detached
    const Eigen::VectorXd p = probs.row(i).transpose();
    const double h = entropy(p);

    loss += -std::log(std::max(p(a), 1e-300)) * advantage * inv_b;
    loss += cfg_.value_coef * advantage * advantage * inv_b;
    loss -= cfg_.entropy_beta * h * inv_b;

    for (int j = 0; j < n_actions_; ++j) {
      const double indicator = (j == a) ? 1.0 : 0.0;
      dlogits(i, j) += inv_b * advantage * (p(j) - indicator);
      if (p(j) > 0.0)
        dlogits(i, j) += inv_b * cfg_.entropy_beta * p(j) * (std::log(p(j)) + h);
    }
    dvalues(i, 0) = inv_b * cfg_.value_coef * 2.0 * (values(i, 0) - batch.returns(i));
  }

  A2cLossResult result;
  result.loss = loss;
  result.policy_grads = policy_.backward(policy_trace, dlogits);
  result.value_grads = value_.backward(value_trace, dvalues);
  return result;
}

A2cLossResult A2cAgent::div_a2c_loss(const RolloutBatch& batch) const {
  if (ring_.empty()) return a2c_loss(batch);

  const Eigen::Index b = batch.obs.rows();
  if (b == 0) throw std::invalid_argument("div_a2c_loss: empty batch");
  const double inv_b = 1.0 / static_cast<double>(b);
  const std::size_t ring_size = ring_.size();
  const double inv_k = 1.0 / static_cast<double>(ring_size);

  // Per-snapshot factor: performance scaling (proactive/reactive) times the
  // global distance-based alpha.
  double p_min = ring_.front().performance, p_max = p_min;
  for (const PolicySnapshot& snap : ring_) {
    p_min = std::min(p_min, snap.performance);
    p_max = std::max(p_max, snap.performance);
  }
  const double global_alpha = scheduler_.alpha();
  std::vector<double> alpha_k(ring_size);
  for (std::size_t k = 0; k < ring_size; ++k) {
    double perf = 1.0;
    if (cfg_.div_mode == A2cDivMode::Proactive)
      perf = performance_alpha(ring_[k].performance, p_min, p_max, PerformanceMode::Proactive);
    else if (cfg_.div_mode == A2cDivMode::Reactive)
      perf = performance_alpha(ring_[k].performance, p_min, p_max, PerformanceMode::Reactive);
    alpha_k[k] = perf * global_alpha;
  }

  bool all_zero = true;
  for (double a : alpha_k)
    if (a != 0.0) all_zero = false;
  if (all_zero) return a2c_loss(batch);

  const ForwardTrace policy_trace = policy_.forward_cached(batch.obs);
  const Eigen::MatrixXd probs = softmax_rows(policy_trace.post.back());
  const ForwardTrace value_trace = value_.forward_cached(batch.obs);
  const Eigen::MatrixXd& values = value_trace.post.back();

  double loss = 0.0;
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(b, n_actions_);
  Eigen::MatrixXd dvalues(b, 1);

  for (Eigen::Index i = 0; i < b; ++i) {
    const int a = batch.actions[i];
    const double advantage = batch.returns(i) - values(i, 0);
    const Eigen::VectorXd p = probs.row(i).transpose();
    const double h = entropy(p);

    loss += -std::log(std::max(p(a), 1e-300)) * advantage * inv_b;
    loss += cfg_.value_coef * advantage * advantage * inv_b;
    loss -= cfg_.entropy_beta * h * inv_b;

    for (int j = 0; j < n_actions_; ++j) {
      const double indicator = (j == a) ? 1.0 : 0.0;
      dlogits(i, j) += inv_b * advantage * (p(j) - indicator);
      if (p(j) > 0.0)
        dlogits(i, j) += inv_b * cfg_.entropy_beta * p(j) * (std::log(p(j)) + h);
    }
    dvalues(i, 0) = inv_b * cfg_.value_coef * 2.0 * (values(i, 0) - batch.returns(i));
  }

  double distance_sum = 0.0;
  const double c = cfg_.clip_c;
  for (std::size_t k = 0; k < ring_size; ++k) {
    const Eigen::MatrixXd snap_probs =
        softmax_rows(ring_[k].policy.forward(batch.obs));
    for (Eigen::Index i = 0; i < b; ++i) {
      const Eigen::VectorXd p = probs.row(i).transpose();
      const Eigen::VectorXd q = snap_probs.row(i).transpose();
      const double kl = kl_divergence(p, q);
      const double clipped = clip_distance(kl, c);
      distance_sum += clipped;
      if (alpha_k[k] == 0.0) continue;
      loss -= alpha_k[k] * clipped * inv_b * inv_k;
      if (kl < c) {
        for (int j = 0; j < n_actions_; ++j) {
          const double log_ratio = std::log(p(j) / std::max(q(j), 1e-10));
          dlogits(i, j) -= alpha_k[k] * inv_b * inv_k * p(j) * (log_ratio - kl);
        }
      }
    }
  }

  A2cLossResult result;
  result.loss = loss;
  result.policy_grads = policy_.backward(policy_trace, dlogits);
  result.value_grads = value_.backward(value_trace, dvalues);
  result.mean_distance = distance_sum * inv_b * inv_k;
  return result;
}

double A2cAgent::evaluate_policy(const Mlp& policy, const GridWorldConfig& cfg,
                                 int episodes) const {
  GridWorld env(cfg);
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    env.reset();
    while (true) {
      const Eigen::VectorXd logits = policy.forward_vec(env.observation());
      int best = 0;
      for (int a = 1; a < n_actions_; ++a)
        if (logits(a) > logits(best)) best = a;
      const GridStepResult step = env.step(static_cast<GridAction>(best));
      total += step.reward;
      if (step.done) break;
    }
  }
  return total / static_cast<double>(episodes);
}

void A2cAgent::snapshot_policy(const GridWorldConfig& eval_cfg) {
  push_snapshot(policy_,
                evaluate_policy(policy_, eval_cfg, cfg_.snapshot_eval_episodes));
}

void A2cAgent::push_snapshot(const Mlp& policy, double performance) {
  PolicySnapshot snap;
  snap.policy = policy;
  snap.performance = performance;
  snap.step = env_steps_;
  ring_.push_back(std::move(snap));
  while (ring_.size() > static_cast<std::size_t>(cfg_.snapshot_ring))
    ring_.pop_front();
}

A2cTrainStats A2cAgent::train(const GridWorldConfig& env_cfg, long total_steps,
                              std::mt19937_64& rng, RewardLog* log,
                              VisitationGrid* visits) {
  std::vector<GridWorld> envs;
  envs.reserve(cfg_.workers);
  for (int w = 0; w < cfg_.workers; ++w) envs.emplace_back(env_cfg);
  worker_episode_reward_.assign(cfg_.workers, 0.0);
  worker_episode_steps_.assign(cfg_.workers, 0);

  int episode_index = 0;
  A2cTrainStats stats;
  while (stats.env_steps < total_steps) {
    RolloutBatch batch = rollout(envs, rng, visits);
    stats.env_steps += batch.obs.rows();

    const A2cLossResult result =
        cfg_.div_mode != A2cDivMode::Off ? div_a2c_loss(batch) : a2c_loss(batch);
    policy_optimizer_.step(policy_, result.policy_grads);
    value_optimizer_.step(value_, result.value_grads);
    if (cfg_.div_mode != A2cDivMode::Off && !ring_.empty())
      scheduler_.observe_distance(result.mean_distance);
    scheduler_.advance(stats.env_steps);
    ++updates_;
    ++stats.updates;

    if (log) {
      for (std::size_t e = 0; e < batch.finished_episode_rewards.size(); ++e) {
        EpisodeRecord rec;
        rec.episode = episode_index++;
        rec.total_reward = batch.finished_episode_rewards[e];
        rec.steps = batch.finished_episode_steps[e];
        log->push(rec);
      }
    }

    if (cfg_.div_mode != A2cDivMode::Off && updates_ % cfg_.snapshot_every == 0)
      snapshot_policy(env_cfg);
  }
  stats.final_alpha = scheduler_.alpha();
  return stats;
}

}  // namespace divexplore
