#pragma once

#include "divexplore/a2c.hpp"
#include "divexplore/ddpg.hpp"
#include "divexplore/dqn.hpp"
#include "divexplore/gridworld.hpp"
#include "divexplore/pointmass.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace divexplore {

enum class AgentKind { Dqn, DivDqn, Ddpg, DivDdpg, A2c, DivA2c };

const char* agent_kind_name(AgentKind kind);
AgentKind agent_kind_from_name(const std::string& name);
bool agent_is_diversity(AgentKind kind);

enum class EnvKind { Grid, PointMass };

/// Parse failure with the offending key and line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully validated experiment description. Every knob the supplementary
/// material would have pinned lives here so runs are reproducible from the
/// config file alone.
struct ExperimentConfig {
  std::string name;  // defaults to <agent>_<env summary>
  AgentKind agent = AgentKind::Dqn;
  std::vector<int> seeds = {0, 1, 2};
  long budget = 200000;  // total environment steps per seed
  std::string out_dir = "runs";

  EnvKind env = EnvKind::Grid;
  GridWorldConfig grid;
  PointMassConfig pointmass;

  // Hyperparameters; which block applies depends on the agent.
  long replay_capacity = 100000;
  DqnConfig dqn;
  DdpgConfig ddpg;
  A2cConfig a2c;

  /// eps decay expressed as a fraction of the budget; <= 0 means the
  /// absolute dqn.eps_decay_steps value is used as-is.
  double eps_decay_fraction = 0.1;

  /// Fraction of the budget over which linear alpha anneals to zero.
  double alpha_fraction = 1.0;

  std::string default_name() const;
  void finalize();  // fills derived fields (name, eps decay, linear T) and validates
};

/// Parses the sectioned key=value format. Unknown keys, type errors, and
/// invariant violations raise ConfigError naming the key and line.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical text form; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace divexplore
