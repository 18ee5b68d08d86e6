#include "divexplore/config.hpp"
#include "divexplore/distributions.hpp"
#include "divexplore/metrics.hpp"
#include "divexplore/mlp.hpp"
#include "divexplore/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <random>

namespace {

using namespace divexplore;

std::string default_out_root() {
  const char* env = std::getenv("DIV_EXPLORE_OUT");
  return env && *env ? env : "runs";
}

int cmd_run(const std::string& config_path, const std::vector<int>& seed_override,
            const std::string& out_override, long budget_override) {
  ExperimentConfig cfg = parse_config_file(config_path);
  if (!seed_override.empty()) cfg.seeds = seed_override;
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (budget_override >= 0) cfg.budget = budget_override;
  cfg.finalize();

  const ExperimentResult result = run_experiment(cfg);
  std::cout << "wrote " << result.dir << "\n";
  bool all_ok = true;
  for (const SeedResult& s : result.seeds) {
    std::cout << "seed " << s.seed << ": ";
    if (s.ok)
      std::cout << "mean_last_10 " << s.mean_last10 << ", coverage " << s.coverage
                << ", episodes " << s.episodes << ", steps " << s.steps << ", "
                << s.wall_ms << " ms\n";
    else {
      std::cout << "FAILED: " << s.error << "\n";
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}

int cmd_reproduce_table1(const std::vector<int>& sizes, const std::string& out_root) {
  const Table1Report report = reproduce_table1(sizes, out_root, &std::cerr);
  print_table1(report, std::cout);
  return 0;
}

int cmd_heatmap(const std::string& run_dir) {
  const std::string path = run_dir + "/heatmap.pgm";
  int width = 0, height = 0;
  const std::vector<std::uint8_t> pixels = load_pgm(path, &width, &height);
  std::size_t visited = 0;
  int max_intensity = 0;
  for (std::uint8_t p : pixels) {
    if (p > 0) ++visited;
    max_intensity = std::max(max_intensity, static_cast<int>(p));
  }
  std::cout << path << ": " << width << "x" << height << ", visited cells "
            << visited << "/" << pixels.size() << " ("
            << 100.0 * static_cast<double>(visited) / static_cast<double>(pixels.size())
            << "%), max intensity " << max_intensity << "\n";
  return 0;
}

int cmd_gradcheck() {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> dim_dist(1, 16);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int in = dim_dist(rng), mid = dim_dist(rng), out = dim_dist(rng);
    Mlp net({in, mid, out}, {Activation::Tanh, Activation::Identity}, rng());
    Eigen::MatrixXd input(3, in);
    for (Eigen::Index i = 0; i < input.size(); ++i) *(input.data() + i) = val(rng);
    const auto loss = [](const Eigen::MatrixXd& y, Eigen::MatrixXd* grad) {
      if (grad) *grad = 2.0 * y / static_cast<double>(y.size());
      return y.squaredNorm() / static_cast<double>(y.size());
    };
    const double err = gradient_check(net, input, loss);
    worst = std::max(worst, err);
    std::cout << "net " << in << "-" << mid << "-" << out
              << ": max relative error " << err << "\n";
  }
  std::cout << "worst: " << worst << (worst < 1e-4 ? " (ok)" : " (too large)") << "\n";
  return worst < 1e-4 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diversity-driven exploration experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<int> seeds;
  std::string out_dir;
  long budget = -1;
  CLI::App* run = app.add_subcommand("run", "train from a config file");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--seed", seeds, "replace the config's seed list");
  run->add_option("--out", out_dir, "output root directory");
  run->add_option("--budget", budget, "override total environment steps");

  std::vector<int> sizes{50, 100, 200};
  std::string table_out = default_out_root();
  CLI::App* table =
      app.add_subcommand("reproduce-table1", "gridworld reproduction runs");
  table->add_option("--sizes", sizes, "gridworld sizes to run");
  table->add_option("--out", table_out, "output root directory");

  std::string run_dir;
  CLI::App* heatmap = app.add_subcommand("heatmap", "inspect a run's heatmap");
  heatmap->add_option("run-dir", run_dir, "seed run directory")->required();

  app.add_subcommand("gradcheck", "finite-difference check of the MLP backward pass");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, seeds, out_dir, budget);
    if (table->parsed()) return cmd_reproduce_table1(sizes, table_out);
    if (heatmap->parsed()) return cmd_heatmap(run_dir);
    return cmd_gradcheck();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
