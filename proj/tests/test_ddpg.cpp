#include "divexplore/ddpg.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace divexplore;

namespace {

Eigen::VectorXd flatten_grads(const Mlp& net, const Gradients& g) {
  Eigen::VectorXd flat(net.parameter_count());
  Eigen::Index pos = 0;
  for (std::size_t k = 0; k < g.weight.size(); ++k) {
    const auto& w = g.weight[k];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat(pos++) = w(r, c);
    flat.segment(pos, g.bias[k].size()) = g.bias[k];
    pos += g.bias[k].size();
  }
  return flat;
}

template <typename LossFn>
double fd_check(Mlp& net, const Eigen::VectorXd& analytic, LossFn loss_of_params) {
  const Eigen::VectorXd theta = net.flatten();
  const double h = 1e-6;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd p = theta;
    p(i) = theta(i) + h;
    net.set_from_flat(p);
    const double up = loss_of_params();
    p(i) = theta(i) - h;
    net.set_from_flat(p);
    const double down = loss_of_params();
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(numeric), std::abs(analytic(i)), 1e-8});
    worst = std::max(worst, std::abs(numeric - analytic(i)) / denom);
  }
  net.set_from_flat(theta);
  return worst;
}

void zero_net(Mlp& net) {
  for (auto& layer : net.layers()) {
    layer.weight.setZero();
    layer.bias.setZero();
  }
}

std::vector<const Transition*> as_batch(const std::vector<Transition>& storage) {
  std::vector<const Transition*> out;
  for (const auto& t : storage) out.push_back(&t);
  return out;
}

std::vector<Transition> random_transitions(int n, int obs_dim, int act_dim,
                                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution coin(0.2);
  std::vector<Transition> out;
  for (int i = 0; i < n; ++i) {
    Transition t;
    t.state = Eigen::VectorXd::NullaryExpr(obs_dim, [&](Eigen::Index) { return u(rng); });
    t.next_state = Eigen::VectorXd::NullaryExpr(obs_dim, [&](Eigen::Index) { return u(rng); });
    t.action_vec = Eigen::VectorXd::NullaryExpr(act_dim, [&](Eigen::Index) { return 0.05 * u(rng); });
    t.reward = u(rng) > 0.8 ? 1.0 : 0.0;
    t.done = coin(rng);
    out.push_back(t);
  }
  return out;
}

DdpgConfig flat_cfg() {
  DdpgConfig cfg;
  cfg.actor_hidden = {};
  cfg.critic_hidden = {};
  cfg.alpha.mode = AlphaMode::Fixed;
  return cfg;
}

}  // namespace

TEST_CASE("ou noise is deterministic per seed and mean-reverting") {
  std::mt19937_64 rng_a(3), rng_b(3);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(2, 5.0);
  Eigen::VectorXd a = ou_noise_step(x, 0.15, 0.2, rng_a);
  Eigen::VectorXd b = ou_noise_step(x, 0.15, 0.2, rng_b);
  CHECK(a == b);

  // With sigma = 0 the pull toward zero is exact: x + theta * (0 - x).
  std::mt19937_64 rng_c(0);
  Eigen::VectorXd pulled = ou_noise_step(x, 0.15, 0.0, rng_c);
  CHECK(pulled(0) == doctest::Approx(5.0 * 0.85));
  CHECK(pulled(1) == doctest::Approx(5.0 * 0.85));
}

TEST_CASE("ou noise long-run variance matches the stationary value") {
  // Discrete OU: var = sigma^2 / (1 - (1 - theta)^2) = sigma^2 / (2 theta - theta^2).
  const double theta = 0.15, sigma = 0.2;
  const double expected = sigma * sigma / (2.0 * theta - theta * theta);
  std::mt19937_64 rng(9);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
  double sum = 0.0, sum_sq = 0.0;
  const int burn = 1000, samples = 200000;
  for (int i = 0; i < burn; ++i) x = ou_noise_step(x, theta, sigma, rng);
  for (int i = 0; i < samples; ++i) {
    x = ou_noise_step(x, theta, sigma, rng);
    sum += x(0);
    sum_sq += x(0) * x(0);
  }
  const double mean = sum / samples;
  const double var = sum_sq / samples - mean * mean;
  CHECK(var == doctest::Approx(expected).epsilon(0.1));
}

TEST_CASE("policy action stays inside the action bound") {
  DdpgConfig cfg;
  cfg.actor_hidden = {8};
  DdpgAgent agent(4, 2, 0.05, cfg, 0);
  agent.actor().layers()[1].bias.setConstant(50.0);  // saturate the tanh head
  Eigen::VectorXd a = agent.policy_action(Eigen::Vector4d(0.1, 0.2, 0.3, 0.4));
  CHECK(a.cwiseAbs().maxCoeff() <= 0.05 + 1e-15);
  CHECK(a(0) == doctest::Approx(0.05));
}

TEST_CASE("zero-weight actor outputs the zero action") {
  DdpgAgent agent(4, 2, 0.05, flat_cfg(), 0);
  zero_net(agent.actor());
  CHECK(agent.policy_action(Eigen::Vector4d::Ones()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("critic loss matches the hand-computed TD example") {
  DdpgConfig cfg = flat_cfg();
  cfg.gamma = 0.99;
  DdpgAgent agent(4, 2, 0.05, cfg, 0);
  zero_net(agent.critic());
  zero_net(agent.target_critic());
  zero_net(agent.target_actor());
  agent.critic().layers()[0].bias << 0.3;
  agent.target_critic().layers()[0].bias << 0.5;

  // y = 0.1 + 0.99 * 0.5 = 0.595; loss = (0.3 - 0.595)^2.
  Transition t;
  t.state = Eigen::Vector4d::Zero();
  t.action_vec = Eigen::Vector2d::Zero();
  t.reward = 0.1;
  t.next_state = Eigen::Vector4d::Zero();
  t.done = false;
  std::vector<Transition> storage{t};
  auto batch = as_batch(storage);
  CHECK(agent.critic_loss(batch).loss == doctest::Approx(0.087025).epsilon(1e-12));

  storage[0].done = true;  // terminal: y = reward alone
  auto batch2 = as_batch(storage);
  CHECK(agent.critic_loss(batch2).loss == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("critic gradient agrees with finite differences") {
  DdpgConfig cfg;
  cfg.actor_hidden = {6};
  cfg.critic_hidden = {6};
  DdpgAgent agent(4, 2, 0.05, cfg, 13);
  std::mt19937_64 rng(14);
  auto storage = random_transitions(12, 4, 2, rng);
  auto batch = as_batch(storage);

  auto result = agent.critic_loss(batch);
  const Eigen::VectorXd analytic = flatten_grads(agent.critic(), result.grads);
  const double err = fd_check(agent.critic(), analytic,
                              [&] { return agent.critic_loss(batch).loss; });
  CHECK(err < 1e-4);
}

TEST_CASE("actor loss is minus the mean critic value of the policy action") {
  DdpgConfig cfg = flat_cfg();
  DdpgAgent agent(2, 1, 1.0, cfg, 0);
  zero_net(agent.actor());
  zero_net(agent.critic());
  agent.critic().layers()[0].bias << 0.7;  // flat critic

  Transition t;
  t.state = Eigen::Vector2d::Zero();
  t.action_vec = Eigen::VectorXd::Zero(1);
  t.next_state = Eigen::Vector2d::Zero();
  std::vector<Transition> storage{t};
  auto batch = as_batch(storage);
  CHECK(agent.actor_loss(batch).loss == doctest::Approx(-0.7).epsilon(1e-12));
}

TEST_CASE("actor gradient (through the critic) agrees with finite differences") {
  DdpgConfig cfg;
  cfg.actor_hidden = {6};
  cfg.critic_hidden = {6};
  DdpgAgent agent(4, 2, 0.05, cfg, 17);
  std::mt19937_64 rng(18);
  auto storage = random_transitions(12, 4, 2, rng);
  auto batch = as_batch(storage);

  auto result = agent.actor_loss(batch);
  const Eigen::VectorXd analytic = flatten_grads(agent.actor(), result.grads);
  const double err = fd_check(agent.actor(), analytic,
                              [&] { return agent.actor_loss(batch).loss; });
  CHECK(err < 1e-4);
}

TEST_CASE("diversity actor loss subtracts alpha times the clipped action MSE") {
  DdpgConfig cfg = flat_cfg();
  cfg.diversity = true;
  cfg.alpha.alpha0 = 0.1;
  DdpgAgent agent(2, 1, 1.0, cfg, 0);
  zero_net(agent.actor());
  zero_net(agent.critic());
  agent.actor().layers()[0].bias << std::atanh(0.2);  // policy outputs 0.2

  Transition t;
  t.state = Eigen::Vector2d::Zero();
  t.action_vec = Eigen::VectorXd::Constant(1, 0.5);  // stored behavior action
  t.next_state = Eigen::Vector2d::Zero();
  std::vector<Transition> storage{t};
  auto batch = as_batch(storage);

  // d = (0.2 - 0.5)^2 = 0.09; loss = 0 - 0.1 * 0.09.
  auto result = agent.div_actor_loss(batch);
  CHECK(result.mean_distance == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(result.loss == doctest::Approx(-0.009).epsilon(1e-12));
}

TEST_CASE("diversity actor loss with alpha = 0 is bit-identical to vanilla") {
  DdpgConfig cfg;
  cfg.actor_hidden = {6};
  cfg.critic_hidden = {6};
  cfg.diversity = true;
  cfg.alpha.mode = AlphaMode::Fixed;
  cfg.alpha.alpha0 = 0.0;
  DdpgAgent agent(4, 2, 0.05, cfg, 19);
  std::mt19937_64 rng(20);
  auto storage = random_transitions(8, 4, 2, rng);
  auto batch = as_batch(storage);

  auto vanilla = agent.actor_loss(batch);
  auto div = agent.div_actor_loss(batch);
  CHECK(div.loss == vanilla.loss);
  for (std::size_t k = 0; k < vanilla.grads.weight.size(); ++k) {
    CHECK(div.grads.weight[k] == vanilla.grads.weight[k]);
    CHECK(div.grads.bias[k] == vanilla.grads.bias[k]);
  }
}

TEST_CASE("diversity actor gradient agrees with finite differences") {
  DdpgConfig cfg;
  cfg.actor_hidden = {6};
  cfg.critic_hidden = {6};
  cfg.diversity = true;
  cfg.alpha.mode = AlphaMode::Fixed;
  cfg.alpha.alpha0 = 0.25;
  DdpgAgent agent(4, 2, 0.05, cfg, 23);
  std::mt19937_64 rng(24);
  auto storage = random_transitions(12, 4, 2, rng);
  auto batch = as_batch(storage);

  auto result = agent.div_actor_loss(batch);
  const Eigen::VectorXd analytic = flatten_grads(agent.actor(), result.grads);
  const double err = fd_check(agent.actor(), analytic,
                              [&] { return agent.div_actor_loss(batch).loss; });
  CHECK(err < 1e-4);
}

TEST_CASE("soft update blends tau of the online parameters into the target") {
  DdpgConfig cfg = flat_cfg();
  cfg.tau = 0.005;
  DdpgAgent agent(2, 1, 1.0, cfg, 0);
  agent.actor().set_from_flat(Eigen::VectorXd::Ones(agent.actor().parameter_count()));
  agent.critic().set_from_flat(Eigen::VectorXd::Ones(agent.critic().parameter_count()));
  agent.target_actor().set_from_flat(Eigen::VectorXd::Zero(agent.actor().parameter_count()));
  agent.target_critic().set_from_flat(Eigen::VectorXd::Zero(agent.critic().parameter_count()));

  agent.soft_update();
  CHECK(agent.target_actor().flatten().isApproxToConstant(0.005, 1e-15));
  CHECK(agent.target_critic().flatten().isApproxToConstant(0.005, 1e-15));
}

TEST_CASE("train_episode is deterministic for a fixed seed") {
  DdpgConfig cfg;
  cfg.actor_hidden = {8};
  cfg.critic_hidden = {8};
  cfg.warmup_steps = 20;
  cfg.batch_size = 8;
  PointMassConfig pcfg;
  pcfg.horizon = 40;

  auto run = [&](std::uint64_t seed) {
    DdpgAgent agent(4, 2, pcfg.action_bound, cfg, seed);
    PointMass env(pcfg, seed);
    ReplayBuffer replay(5000);
    std::mt19937_64 rng(seed);
    for (int ep = 0; ep < 3; ++ep) agent.train_episode(env, replay, rng);
    return agent.actor().flatten();
  };

  const Eigen::VectorXd a = run(33);
  CHECK(a == run(33));
  CHECK(a != run(34));
}

TEST_CASE("vanilla variant explores with noise, diversity variant acts greedily") {
  DdpgConfig cfg;
  cfg.actor_hidden = {8};
  cfg.warmup_steps = 1000000;  // no updates
  PointMassConfig pcfg;
  pcfg.horizon = 30;

  // Diversity: replayed actions must equal the deterministic policy output.
  cfg.diversity = true;
  DdpgAgent div_agent(4, 2, pcfg.action_bound, cfg, 41);
  PointMass env(pcfg, 41);
  ReplayBuffer replay(1000);
  std::mt19937_64 rng(41);
  div_agent.train_episode(env, replay, rng);
  REQUIRE(replay.size() > 0);
  for (std::size_t i = 0; i < replay.size(); ++i) {
    const Transition& t = replay.at(i);
    CHECK((t.action_vec - div_agent.policy_action(t.state)).cwiseAbs().maxCoeff() < 1e-12);
  }

  // Vanilla: at least one stored action differs from the policy output.
  cfg.diversity = false;
  DdpgAgent van_agent(4, 2, pcfg.action_bound, cfg, 41);
  PointMass env2(pcfg, 41);
  ReplayBuffer replay2(1000);
  std::mt19937_64 rng2(41);
  van_agent.train_episode(env2, replay2, rng2);
  bool any_noise = false;
  for (std::size_t i = 0; i < replay2.size(); ++i) {
    const Transition& t = replay2.at(i);
    if ((t.action_vec - van_agent.policy_action(t.state)).cwiseAbs().maxCoeff() > 1e-9)
      any_noise = true;
  }
  CHECK(any_noise);
}
