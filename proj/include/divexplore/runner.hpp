#pragma once

#include "divexplore/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace divexplore {

struct SeedResult {
  int seed = 0;
  double mean_last10 = 0.0;
  double coverage = 0.0;
  double final_alpha = 0.0;
  long episodes = 0;
  long steps = 0;
  bool ok = true;
  std::string error;
  long wall_ms = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::string dir;  // <out>/<name>
  std::vector<SeedResult> seeds;
};

/// Trains one seed and writes <seed_dir>/{rewards.csv, heatmap.pgm,
/// checkpoint, config.cfg}. The run is a pure function of (config, seed):
/// all randomness flows from one generator seeded with the seed value.
SeedResult run_seed(const ExperimentConfig& cfg, int seed, const std::string& seed_dir);

/// Runs every configured seed; failures are recorded per seed, not fatal.
/// Writes the aggregate one-line-per-seed summary.csv.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Bundled desk-scale reproduction configs for the gridworld table:
/// budgets 2e5 / 8e5 / 3e6 steps for 50 / 100 / 200.
ExperimentConfig table1_config(int size, RewardMode mode, AgentKind agent,
                               const std::string& out_root);

struct Table1Cell {
  AgentKind agent = AgentKind::Dqn;
  RewardMode mode = RewardMode::Sparse;
  int size = 0;
  double reference_value = 0.0;
  std::vector<SeedResult> seeds;

  double mean_of_means() const;
  double mean_coverage() const;
  int seeds_at(double value) const;  // how many seeds hit `value` exactly
};

struct Table1Report {
  std::vector<Table1Cell> cells;
  const Table1Cell* find(AgentKind agent, RewardMode mode, int size) const;
};

/// Runs {dqn, div-dqn} x {deceptive, sparse} x sizes and returns every cell.
/// Progress lines go to `log` when non-null.
Table1Report reproduce_table1(const std::vector<int>& sizes,
                              const std::string& out_root,
                              std::ostream* log = nullptr);

/// Table next to the published reference values plus one verdict line per
/// comparison rule (sparse exact means, deceptive ratio >= 10x, coverage
/// at 200).
void print_table1(const Table1Report& report, std::ostream& out);

double reference_table1_value(AgentKind agent, RewardMode mode, int size);
long table1_budget(int size);

}  // namespace divexplore
