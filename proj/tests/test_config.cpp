#include "divexplore/config.hpp"

#include <doctest.h>

#include <string>

using namespace divexplore;

TEST_CASE("agent names round-trip") {
  for (AgentKind kind : {AgentKind::Dqn, AgentKind::DivDqn, AgentKind::Ddpg,
                         AgentKind::DivDdpg, AgentKind::A2c, AgentKind::DivA2c}) {
    CHECK(agent_kind_from_name(agent_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(agent_kind_from_name("dddqn"), ConfigError);
  CHECK(agent_is_diversity(AgentKind::DivDqn));
  CHECK_FALSE(agent_is_diversity(AgentKind::Dqn));
}

TEST_CASE("minimal config picks sensible defaults and a derived name") {
  ExperimentConfig cfg = parse_config_text("[experiment]\nagent = dqn\n");
  CHECK(cfg.agent == AgentKind::Dqn);
  CHECK(cfg.name == "dqn_grid50x50_sparse");
  CHECK(cfg.seeds == std::vector<int>{0, 1, 2});
  CHECK(cfg.budget == 200000);
  CHECK_FALSE(cfg.dqn.diversity);
}

TEST_CASE("a full config parses into every block") {
  const std::string text = R"(
# reproduction run
[experiment]
name = demo
agent = div-dqn
seeds = 3 4 5
budget = 1000

[env]
type = grid
width = 20
height = 20
reward_mode = deceptive

[hyper]
hidden = 32 32
lr = 0.002
gamma = 0.95
batch_size = 16
alpha_mode = distance
alpha0 = 0.2
delta = 0.07
clip_c = 5
perf_scaling = reactive
perf_window = 25
perf_min = 0.1
perf_max = 0.9
)";
  ExperimentConfig cfg = parse_config_text(text);
  CHECK(cfg.name == "demo");
  CHECK(cfg.agent == AgentKind::DivDqn);
  CHECK(cfg.seeds == std::vector<int>{3, 4, 5});
  CHECK(cfg.grid.mode == RewardMode::Deceptive);
  CHECK(cfg.grid.width == 20);
  CHECK(cfg.dqn.hidden == std::vector<int>{32, 32});
  CHECK(cfg.dqn.optimizer.learning_rate == 0.002);
  CHECK(cfg.dqn.gamma == 0.95);
  CHECK(cfg.dqn.batch_size == 16);
  CHECK(cfg.dqn.alpha.mode == AlphaMode::Distance);
  CHECK(cfg.dqn.alpha.alpha0 == 0.2);
  CHECK(cfg.dqn.alpha.delta == 0.07);
  CHECK(cfg.dqn.clip_c == 5.0);
  CHECK(cfg.dqn.perf_reactive);
  CHECK(cfg.dqn.perf_window == 25);
  CHECK(cfg.dqn.perf_min == 0.1);
  CHECK(cfg.dqn.perf_max == 0.9);
  CHECK(cfg.dqn.diversity);  // derived from the agent kind
}

TEST_CASE("finalize derives epsilon decay from the budget fraction") {
  ExperimentConfig cfg = parse_config_text(
      "[experiment]\nagent = dqn\nbudget = 50000\n[hyper]\neps_decay_fraction = 0.2\n");
  CHECK(cfg.dqn.eps_decay_steps == 10000);

  // An absolute step count wins over the fraction.
  ExperimentConfig abs = parse_config_text(
      "[experiment]\nagent = dqn\nbudget = 50000\n[hyper]\neps_decay_steps = 123\n");
  CHECK(abs.dqn.eps_decay_steps == 123);
}

TEST_CASE("div-a2c defaults to reactive snapshot weighting") {
  ExperimentConfig cfg = parse_config_text("[experiment]\nagent = div-a2c\n");
  CHECK(cfg.a2c.div_mode == A2cDivMode::Reactive);

  ExperimentConfig pro = parse_config_text(
      "[experiment]\nagent = div-a2c\n[hyper]\ndiv_mode = proactive\n");
  CHECK(pro.a2c.div_mode == A2cDivMode::Proactive);

  // Plain a2c ignores any diversity mode.
  ExperimentConfig plain = parse_config_text(
      "[experiment]\nagent = a2c\n[hyper]\ndiv_mode = proactive\n");
  CHECK(plain.a2c.div_mode == A2cDivMode::Off);
}

TEST_CASE("parse errors name the key and line") {
  CHECK_THROWS_WITH_AS(parse_config_text("[experiment]\nagent = dqn\nbudgct = 5\n"),
                       doctest::Contains("budgct"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[experiment]\nagent = dqn\nbudget = soon\n"),
                       doctest::Contains("line 3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[mystery]\n"), doctest::Contains("mystery"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("agent = dqn\n"),
                       doctest::Contains("outside any section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[experiment]\nname = x\n"),
                       doctest::Contains("agent: required"), ConfigError);
}

TEST_CASE("invalid environment shapes are rejected at finalize") {
  CHECK_THROWS_AS(parse_config_text("[experiment]\nagent = dqn\n[env]\nwidth = 1\nheight = 1\n"),
                  ConfigError);
}

TEST_CASE("pointmass configs parse their own block") {
  ExperimentConfig cfg = parse_config_text(R"(
[experiment]
agent = div-ddpg
[env]
type = pointmass
target_x = 0.4
target_y = -0.2
threshold = 0.1
horizon = 300
)");
  CHECK(cfg.env == EnvKind::PointMass);
  CHECK(cfg.pointmass.target.x() == 0.4);
  CHECK(cfg.pointmass.target.y() == -0.2);
  CHECK(cfg.pointmass.threshold == 0.1);
  CHECK(cfg.pointmass.horizon == 300);
  CHECK(cfg.ddpg.diversity);
  CHECK(cfg.name == "div-ddpg_pointmass");
}

TEST_CASE("serialize / parse round-trips the whole config") {
  ExperimentConfig cfg = parse_config_text(R"(
[experiment]
agent = div-a2c
seeds = 7
budget = 12345
[env]
type = grid
width = 30
height = 40
reward_mode = deceptive
[hyper]
hidden = 24
lr = 0.0007
workers = 3
rollout_len = 7
entropy_beta = 0.02
snapshot_every = 9
alpha_mode = linear
alpha0 = 0.3
perf_scaling = reactive
perf_window = 12
perf_max = 0.5
)");
  ExperimentConfig again = parse_config_text(serialize_config(cfg));
  CHECK(again == cfg);
  CHECK(again.a2c.workers == 3);
  CHECK(again.a2c.alpha.mode == AlphaMode::Linear);
}

TEST_CASE("serialize round-trips a pointmass ddpg config too") {
  ExperimentConfig cfg = parse_config_text(R"(
[experiment]
agent = ddpg
[env]
type = pointmass
randomize_target = true
[hyper]
actor_lr = 0.0002
critic_lr = 0.002
tau = 0.01
noise = gaussian
gaussian_sigma = 0.3
)");
  ExperimentConfig again = parse_config_text(serialize_config(cfg));
  CHECK(again == cfg);
  CHECK(again.ddpg.noise == NoiseKind::Gaussian);
  CHECK(again.pointmass.randomize_target);
}
