#include "divexplore/runner.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace divexplore;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ExperimentConfig tiny_grid_config(AgentKind agent, const std::string& out) {
  ExperimentConfig cfg = parse_config_text(R"(
[experiment]
agent = )" + std::string(agent_kind_name(agent)) + R"(
seeds = 0
budget = 1500
[env]
type = grid
width = 6
height = 6
[hyper]
hidden = 16
warmup = 50
batch_size = 8
)");
  cfg.out_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("bundled reproduction budgets are pinned per grid size") {
  CHECK(table1_budget(50) == 200000);
  CHECK(table1_budget(100) == 800000);
  CHECK(table1_budget(200) == 6000000);
}

TEST_CASE("published reference values for the gridworld table") {
  CHECK(reference_table1_value(AgentKind::Dqn, RewardMode::Sparse, 50) == 0.300);
  CHECK(reference_table1_value(AgentKind::Dqn, RewardMode::Sparse, 100) == 0.100);
  CHECK(reference_table1_value(AgentKind::Dqn, RewardMode::Sparse, 200) == 0.000);
  CHECK(reference_table1_value(AgentKind::DivDqn, RewardMode::Sparse, 50) == 1.000);
  CHECK(reference_table1_value(AgentKind::DivDqn, RewardMode::Sparse, 200) == 1.000);
  CHECK(reference_table1_value(AgentKind::Dqn, RewardMode::Deceptive, 100) == 0.010);
  CHECK(reference_table1_value(AgentKind::DivDqn, RewardMode::Deceptive, 50) == 0.202);
  CHECK(reference_table1_value(AgentKind::DivDqn, RewardMode::Deceptive, 100) == 0.604);
  CHECK(reference_table1_value(AgentKind::DivDqn, RewardMode::Deceptive, 200) == 0.208);
}

TEST_CASE("bundled table configs wire the right env and agent") {
  ExperimentConfig cfg = table1_config(50, RewardMode::Deceptive, AgentKind::DivDqn, "out");
  CHECK(cfg.env == EnvKind::Grid);
  CHECK(cfg.grid.width == 50);
  CHECK(cfg.grid.height == 50);
  CHECK(cfg.grid.mode == RewardMode::Deceptive);
  CHECK(cfg.agent == AgentKind::DivDqn);
  CHECK(cfg.budget == 200000);
  CHECK(cfg.seeds.size() == 3);
  CHECK(cfg.dqn.diversity);
  CHECK(cfg.dqn.eps_end == 0.01);
  CHECK(cfg.replay_capacity == 100000);
  CHECK(table1_config(50, RewardMode::Sparse, AgentKind::Dqn, "out").dqn.eps_end ==
        0.05);
  CHECK(cfg.grid.deceptive_reward == 0.01);
}

TEST_CASE("run_seed writes the per-seed artifacts") {
  const fs::path out = fs::temp_directory_path() / "divexplore_runner_test";
  fs::remove_all(out);
  ExperimentConfig cfg = tiny_grid_config(AgentKind::Dqn, out.string());
  SeedResult result = run_seed(cfg, 0, (out / "seed0").string());
  CHECK(result.ok);
  CHECK(result.steps >= cfg.budget);
  CHECK(result.episodes > 0);
  CHECK(fs::exists(out / "seed0" / "rewards.csv"));
  CHECK(fs::exists(out / "seed0" / "heatmap.pgm"));
  const std::string csv = slurp(out / "seed0" / "rewards.csv");
  CHECK(csv.rfind("episode,total_reward,steps,wall_ms", 0) == 0);
  fs::remove_all(out);
}

TEST_CASE("identical configuration and seed give byte-identical artifacts") {
  const fs::path out = fs::temp_directory_path() / "divexplore_rerun_test";
  fs::remove_all(out);
  ExperimentConfig cfg = tiny_grid_config(AgentKind::DivDqn, out.string());
  run_seed(cfg, 1, (out / "a").string());
  run_seed(cfg, 1, (out / "b").string());
  CHECK(slurp(out / "a" / "rewards.csv") == slurp(out / "b" / "rewards.csv"));
  CHECK(slurp(out / "a" / "heatmap.pgm") == slurp(out / "b" / "heatmap.pgm"));

  run_seed(cfg, 2, (out / "c").string());
  CHECK(slurp(out / "a" / "rewards.csv") != slurp(out / "c" / "rewards.csv"));
  fs::remove_all(out);
}

TEST_CASE("run_experiment covers every seed and writes the summary") {
  const fs::path out = fs::temp_directory_path() / "divexplore_experiment_test";
  fs::remove_all(out);
  ExperimentConfig cfg = tiny_grid_config(AgentKind::A2c, out.string());
  cfg.seeds = {0, 1};
  ExperimentResult result = run_experiment(cfg);
  CHECK(result.seeds.size() == 2);
  for (const auto& s : result.seeds) CHECK(s.ok);
  CHECK(fs::exists(fs::path(result.dir) / "summary.csv"));
  CHECK(fs::exists(fs::path(result.dir) / "config.cfg"));
  const std::string summary = slurp(fs::path(result.dir) / "summary.csv");
  CHECK(summary.rfind("seed,mean_last_10,coverage,final_alpha,episodes,steps,status,wall_ms", 0) == 0);
  fs::remove_all(out);
}

TEST_CASE("run_seed handles the pointmass ddpg path") {
  const fs::path out = fs::temp_directory_path() / "divexplore_pm_test";
  fs::remove_all(out);
  ExperimentConfig cfg = parse_config_text(R"(
[experiment]
agent = div-ddpg
seeds = 0
budget = 600
[env]
type = pointmass
horizon = 60
[hyper]
hidden = 16
warmup = 50
batch_size = 8
)");
  cfg.out_dir = out.string();
  SeedResult result = run_seed(cfg, 0, (out / "seed0").string());
  CHECK(result.ok);
  CHECK(result.steps >= 600);
  CHECK(fs::exists(out / "seed0" / "rewards.csv"));
  fs::remove_all(out);
}

TEST_CASE("table cell aggregation") {
  Table1Cell cell;
  cell.seeds = {{0, 1.0, 0.5, 0.0, 1, 1, true, "", 0},
                {1, 0.0, 0.3, 0.0, 1, 1, true, "", 0},
                {2, 1.0, 0.4, 0.0, 1, 1, true, "", 0}};
  CHECK(cell.mean_of_means() == doctest::Approx(2.0 / 3.0));
  CHECK(cell.mean_coverage() == doctest::Approx(0.4));
  CHECK(cell.seeds_at(1.0) == 2);
  CHECK(cell.seeds_at(0.0) == 1);
}
