#include "divexplore/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace divexplore {

const char* agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::Dqn: return "dqn";
    case AgentKind::DivDqn: return "div-dqn";
    case AgentKind::Ddpg: return "ddpg";
    case AgentKind::DivDdpg: return "div-ddpg";
    case AgentKind::A2c: return "a2c";
    case AgentKind::DivA2c: return "div-a2c";
  }
  return "?";
}

AgentKind agent_kind_from_name(const std::string& name) {
  if (name == "dqn") return AgentKind::Dqn;
  if (name == "div-dqn") return AgentKind::DivDqn;
  if (name == "ddpg") return AgentKind::Ddpg;
  if (name == "div-ddpg") return AgentKind::DivDdpg;
  if (name == "a2c") return AgentKind::A2c;
  if (name == "div-a2c") return AgentKind::DivA2c;
  throw ConfigError("agent: unknown value '" + name + "'");
}

bool agent_is_diversity(AgentKind kind) {
  return kind == AgentKind::DivDqn || kind == AgentKind::DivDdpg ||
         kind == AgentKind::DivA2c;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& what) {
  std::ostringstream msg;
  msg << key << ": " << what << " (line " << line << ")";
  throw ConfigError(msg.str());
}

double parse_double(const std::string& value, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(value, &pos);
    if (pos != value.size()) fail(line, key, "expected a number, got '" + value + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, key, "expected a number, got '" + value + "'");
  }
}

long parse_long(const std::string& value, int line, const std::string& key) {
  long out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    fail(line, key, "expected an integer, got '" + value + "'");
  return out;
}

int parse_int(const std::string& value, int line, const std::string& key) {
  return static_cast<int>(parse_long(value, line, key));
}

bool parse_bool(const std::string& value, int line, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(line, key, "expected true/false, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& value, int line, const std::string& key) {
  std::vector<int> out;
  std::istringstream in(value);
  std::string token;
  while (in >> token) out.push_back(parse_int(token, line, key));
  if (out.empty()) fail(line, key, "expected at least one integer");
  return out;
}

}  // namespace

std::string ExperimentConfig::default_name() const {
  std::ostringstream name;
  name << agent_kind_name(agent) << "_";
  if (env == EnvKind::Grid) {
    name << "grid" << grid.width << "x" << grid.height << "_"
         << (grid.mode == RewardMode::Sparse ? "sparse" : "deceptive");
  } else {
    name << "pointmass";
  }
  return name.str();
}

void ExperimentConfig::finalize() {
  if (seeds.empty()) throw ConfigError("seeds: at least one seed required");
  if (budget < 0) throw ConfigError("budget: must be >= 0");
  if (name.empty()) name = default_name();

  if (env == EnvKind::Grid) {
    try {
      grid.validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else {
    try {
      pointmass.validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }

  if (eps_decay_fraction > 0.0)
    dqn.eps_decay_steps = static_cast<long>(eps_decay_fraction * static_cast<double>(budget));

  if (alpha_fraction <= 0.0 || alpha_fraction > 1.0)
    throw ConfigError("alpha_fraction: must be in (0, 1]");
  const long horizon_steps =
      std::max<long>(static_cast<long>(alpha_fraction * static_cast<double>(budget)), 1);
  dqn.alpha.total_steps = horizon_steps;
  ddpg.alpha.total_steps = horizon_steps;
  a2c.alpha.total_steps = horizon_steps;

  dqn.diversity = agent == AgentKind::DivDqn;
  ddpg.diversity = agent == AgentKind::DivDdpg;
  if (agent != AgentKind::DivA2c) a2c.div_mode = A2cDivMode::Off;
  else if (a2c.div_mode == A2cDivMode::Off) a2c.div_mode = A2cDivMode::Reactive;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  bool agent_seen = false;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, line, "malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "experiment" && section != "env" && section != "hyper")
        fail(line_no, section, "unknown section");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, line, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, line, "empty key");
    if (value.empty()) fail(line_no, key, "empty value");

    if (section == "experiment") {
      if (key == "name") cfg.name = value;
      else if (key == "agent") { cfg.agent = agent_kind_from_name(value); agent_seen = true; }
      else if (key == "seeds") cfg.seeds = parse_int_list(value, line_no, key);
      else if (key == "budget") cfg.budget = parse_long(value, line_no, key);
      else if (key == "out") cfg.out_dir = value;
      else fail(line_no, key, "unknown key in [experiment]");
    } else if (section == "env") {
      if (key == "type") {
        if (value == "grid") cfg.env = EnvKind::Grid;
        else if (value == "pointmass") cfg.env = EnvKind::PointMass;
        else fail(line_no, key, "expected grid or pointmass, got '" + value + "'");
      } else if (key == "width") cfg.grid.width = parse_int(value, line_no, key);
      else if (key == "height") cfg.grid.height = parse_int(value, line_no, key);
      else if (key == "reward_mode") {
        if (value == "sparse") cfg.grid.mode = RewardMode::Sparse;
        else if (value == "deceptive") cfg.grid.mode = RewardMode::Deceptive;
        else fail(line_no, key, "expected sparse or deceptive, got '" + value + "'");
      } else if (key == "deceptive_reward") cfg.grid.deceptive_reward = parse_double(value, line_no, key);
      else if (key == "goal_reward") cfg.grid.goal_reward = parse_double(value, line_no, key);
      else if (key == "horizon") {
        cfg.grid.horizon = parse_int(value, line_no, key);
        cfg.pointmass.horizon = cfg.grid.horizon > 0 ? cfg.grid.horizon : cfg.pointmass.horizon;
      } else if (key == "half_width") cfg.pointmass.half_width = parse_double(value, line_no, key);
      else if (key == "action_bound") cfg.pointmass.action_bound = parse_double(value, line_no, key);
      else if (key == "target_x") cfg.pointmass.target.x() = parse_double(value, line_no, key);
      else if (key == "target_y") cfg.pointmass.target.y() = parse_double(value, line_no, key);
      else if (key == "randomize_target") cfg.pointmass.randomize_target = parse_bool(value, line_no, key);
      else if (key == "threshold") cfg.pointmass.threshold = parse_double(value, line_no, key);
      else fail(line_no, key, "unknown key in [env]");
    } else if (section == "hyper") {
      if (key == "hidden") {
        const auto dims = parse_int_list(value, line_no, key);
        cfg.dqn.hidden = dims;
        cfg.ddpg.actor_hidden = dims;
        cfg.ddpg.critic_hidden = dims;
        cfg.a2c.hidden = dims;
      } else if (key == "lr") {
        const double lr = parse_double(value, line_no, key);
        cfg.dqn.optimizer.learning_rate = lr;
        cfg.a2c.optimizer.learning_rate = lr;
      } else if (key == "optimizer") {
        OptimizerKind kind;
        if (value == "sgd") kind = OptimizerKind::Sgd;
        else if (value == "adam") kind = OptimizerKind::Adam;
        else fail(line_no, key, "expected sgd or adam, got '" + value + "'");
        cfg.dqn.optimizer.kind = kind;
        cfg.a2c.optimizer.kind = kind;
        cfg.ddpg.actor_optimizer.kind = kind;
        cfg.ddpg.critic_optimizer.kind = kind;
      } else if (key == "adam_eps") {
        const double eps = parse_double(value, line_no, key);
        cfg.dqn.optimizer.epsilon = eps;
        cfg.a2c.optimizer.epsilon = eps;
        cfg.ddpg.actor_optimizer.epsilon = eps;
        cfg.ddpg.critic_optimizer.epsilon = eps;
      } else if (key == "actor_lr") cfg.ddpg.actor_optimizer.learning_rate = parse_double(value, line_no, key);
      else if (key == "critic_lr") cfg.ddpg.critic_optimizer.learning_rate = parse_double(value, line_no, key);
      else if (key == "gamma") {
        const double g = parse_double(value, line_no, key);
        cfg.dqn.gamma = g; cfg.ddpg.gamma = g; cfg.a2c.gamma = g;
      } else if (key == "eps_start") cfg.dqn.eps_start = parse_double(value, line_no, key);
      else if (key == "eps_end") cfg.dqn.eps_end = parse_double(value, line_no, key);
      else if (key == "eps_decay_fraction") cfg.eps_decay_fraction = parse_double(value, line_no, key);
      else if (key == "alpha_fraction") cfg.alpha_fraction = parse_double(value, line_no, key);
      else if (key == "eps_decay_steps") {
        cfg.dqn.eps_decay_steps = parse_long(value, line_no, key);
        cfg.eps_decay_fraction = 0.0;
      } else if (key == "batch_size") {
        const int b = parse_int(value, line_no, key);
        cfg.dqn.batch_size = b; cfg.ddpg.batch_size = b;
      } else if (key == "target_sync") cfg.dqn.target_sync_interval = parse_long(value, line_no, key);
      else if (key == "warmup") {
        const long w = parse_long(value, line_no, key);
        cfg.dqn.warmup_steps = w; cfg.ddpg.warmup_steps = w;
      } else if (key == "train_every") {
        const int t = parse_int(value, line_no, key);
        cfg.dqn.train_every = t; cfg.ddpg.train_every = t;
      } else if (key == "replay_capacity") cfg.replay_capacity = parse_long(value, line_no, key);
      else if (key == "alpha_mode") {
        AlphaMode mode;
        if (value == "fixed") mode = AlphaMode::Fixed;
        else if (value == "linear") mode = AlphaMode::Linear;
        else if (value == "distance") mode = AlphaMode::Distance;
        else fail(line_no, key, "expected fixed/linear/distance, got '" + value + "'");
        cfg.dqn.alpha.mode = mode; cfg.ddpg.alpha.mode = mode; cfg.a2c.alpha.mode = mode;
      } else if (key == "alpha0") {
        const double a = parse_double(value, line_no, key);
        cfg.dqn.alpha.alpha0 = a; cfg.ddpg.alpha.alpha0 = a; cfg.a2c.alpha.alpha0 = a;
      } else if (key == "delta") {
        const double d = parse_double(value, line_no, key);
        cfg.dqn.alpha.delta = d; cfg.ddpg.alpha.delta = d; cfg.a2c.alpha.delta = d;
      } else if (key == "alpha_min") {
        const double a = parse_double(value, line_no, key);
        cfg.dqn.alpha.alpha_min = a; cfg.ddpg.alpha.alpha_min = a; cfg.a2c.alpha.alpha_min = a;
      } else if (key == "alpha_max") {
        const double a = parse_double(value, line_no, key);
        cfg.dqn.alpha.alpha_max = a; cfg.ddpg.alpha.alpha_max = a; cfg.a2c.alpha.alpha_max = a;
      } else if (key == "clip_c") {
        const double c = parse_double(value, line_no, key);
        cfg.dqn.clip_c = c; cfg.ddpg.clip_c = c; cfg.a2c.clip_c = c;
      } else if (key == "tau") cfg.ddpg.tau = parse_double(value, line_no, key);
      else if (key == "noise") {
        if (value == "ou") cfg.ddpg.noise = NoiseKind::Ou;
        else if (value == "gaussian") cfg.ddpg.noise = NoiseKind::Gaussian;
        else fail(line_no, key, "expected ou or gaussian, got '" + value + "'");
      } else if (key == "ou_theta") cfg.ddpg.ou_theta = parse_double(value, line_no, key);
      else if (key == "ou_sigma") cfg.ddpg.ou_sigma = parse_double(value, line_no, key);
      else if (key == "gaussian_sigma") cfg.ddpg.gaussian_sigma = parse_double(value, line_no, key);
      else if (key == "workers") cfg.a2c.workers = parse_int(value, line_no, key);
      else if (key == "rollout_len") cfg.a2c.rollout_len = parse_int(value, line_no, key);
      else if (key == "entropy_beta") cfg.a2c.entropy_beta = parse_double(value, line_no, key);
      else if (key == "value_coef") cfg.a2c.value_coef = parse_double(value, line_no, key);
      else if (key == "snapshot_every") cfg.a2c.snapshot_every = parse_int(value, line_no, key);
      else if (key == "div_mode") {
        if (value == "proactive") cfg.a2c.div_mode = A2cDivMode::Proactive;
        else if (value == "reactive") cfg.a2c.div_mode = A2cDivMode::Reactive;
        else fail(line_no, key, "expected proactive or reactive, got '" + value + "'");
      } else if (key == "perf_scaling") {
        if (value == "reactive") cfg.dqn.perf_reactive = true;
        else if (value == "off") cfg.dqn.perf_reactive = false;
        else fail(line_no, key, "expected off or reactive, got '" + value + "'");
      } else if (key == "perf_window") cfg.dqn.perf_window = parse_int(value, line_no, key);
      else if (key == "perf_min") cfg.dqn.perf_min = parse_double(value, line_no, key);
      else if (key == "perf_max") cfg.dqn.perf_max = parse_double(value, line_no, key);
      else fail(line_no, key, "unknown key in [hyper]");
    } else {
      fail(line_no, key, "key outside any section");
    }
  }

  if (!agent_seen) throw ConfigError("agent: required");
  cfg.finalize();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "[experiment]\n";
  out << "name = " << cfg.name << "\n";
  out << "agent = " << agent_kind_name(cfg.agent) << "\n";
  out << "seeds =";
  for (int s : cfg.seeds) out << " " << s;
  out << "\n";
  out << "budget = " << cfg.budget << "\n";
  out << "out = " << cfg.out_dir << "\n\n";

  out << "[env]\n";
  if (cfg.env == EnvKind::Grid) {
    out << "type = grid\n";
    out << "width = " << cfg.grid.width << "\n";
    out << "height = " << cfg.grid.height << "\n";
    out << "reward_mode = "
        << (cfg.grid.mode == RewardMode::Sparse ? "sparse" : "deceptive") << "\n";
    out << "deceptive_reward = " << cfg.grid.deceptive_reward << "\n";
    out << "goal_reward = " << cfg.grid.goal_reward << "\n";
    out << "horizon = " << cfg.grid.horizon << "\n";
  } else {
    out << "type = pointmass\n";
    out << "half_width = " << cfg.pointmass.half_width << "\n";
    out << "action_bound = " << cfg.pointmass.action_bound << "\n";
    out << "target_x = " << cfg.pointmass.target.x() << "\n";
    out << "target_y = " << cfg.pointmass.target.y() << "\n";
    out << "randomize_target = " << (cfg.pointmass.randomize_target ? "true" : "false") << "\n";
    out << "threshold = " << cfg.pointmass.threshold << "\n";
    out << "horizon = " << cfg.pointmass.horizon << "\n";
  }
  out << "\n[hyper]\n";
  out << "hidden =";
  for (int h : cfg.dqn.hidden) out << " " << h;
  out << "\n";
  out << "optimizer = "
      << (cfg.dqn.optimizer.kind == OptimizerKind::Sgd ? "sgd" : "adam") << "\n";
  out << "lr = " << cfg.dqn.optimizer.learning_rate << "\n";
  out << "adam_eps = " << cfg.dqn.optimizer.epsilon << "\n";
  out << "alpha_fraction = " << cfg.alpha_fraction << "\n";
  out << "actor_lr = " << cfg.ddpg.actor_optimizer.learning_rate << "\n";
  out << "critic_lr = " << cfg.ddpg.critic_optimizer.learning_rate << "\n";
  out << "gamma = " << cfg.dqn.gamma << "\n";
  out << "eps_start = " << cfg.dqn.eps_start << "\n";
  out << "eps_end = " << cfg.dqn.eps_end << "\n";
  if (cfg.eps_decay_fraction > 0.0)
    out << "eps_decay_fraction = " << cfg.eps_decay_fraction << "\n";
  else
    out << "eps_decay_steps = " << cfg.dqn.eps_decay_steps << "\n";
  out << "batch_size = " << cfg.dqn.batch_size << "\n";
  out << "target_sync = " << cfg.dqn.target_sync_interval << "\n";
  out << "warmup = " << cfg.dqn.warmup_steps << "\n";
  out << "train_every = " << cfg.dqn.train_every << "\n";
  out << "replay_capacity = " << cfg.replay_capacity << "\n";
  const AlphaMode mode = cfg.dqn.alpha.mode;
  out << "alpha_mode = "
      << (mode == AlphaMode::Fixed ? "fixed"
                                   : mode == AlphaMode::Linear ? "linear" : "distance")
      << "\n";
  out << "alpha0 = " << cfg.dqn.alpha.alpha0 << "\n";
  out << "delta = " << cfg.dqn.alpha.delta << "\n";
  out << "alpha_min = " << cfg.dqn.alpha.alpha_min << "\n";
  out << "alpha_max = " << cfg.dqn.alpha.alpha_max << "\n";
  out << "clip_c = " << cfg.dqn.clip_c << "\n";
  out << "perf_scaling = " << (cfg.dqn.perf_reactive ? "reactive" : "off") << "\n";
  out << "perf_window = " << cfg.dqn.perf_window << "\n";
  out << "perf_min = " << cfg.dqn.perf_min << "\n";
  out << "perf_max = " << cfg.dqn.perf_max << "\n";
  out << "tau = " << cfg.ddpg.tau << "\n";
  out << "noise = " << (cfg.ddpg.noise == NoiseKind::Ou ? "ou" : "gaussian") << "\n";
  out << "ou_theta = " << cfg.ddpg.ou_theta << "\n";
  out << "ou_sigma = " << cfg.ddpg.ou_sigma << "\n";
  out << "gaussian_sigma = " << cfg.ddpg.gaussian_sigma << "\n";
  out << "workers = " << cfg.a2c.workers << "\n";
  out << "rollout_len = " << cfg.a2c.rollout_len << "\n";
  out << "entropy_beta = " << cfg.a2c.entropy_beta << "\n";
  out << "value_coef = " << cfg.a2c.value_coef << "\n";
  out << "snapshot_every = " << cfg.a2c.snapshot_every << "\n";
  if (cfg.a2c.div_mode != A2cDivMode::Off)
    out << "div_mode = "
        << (cfg.a2c.div_mode == A2cDivMode::Proactive ? "proactive" : "reactive")
        << "\n";
  return out.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

}  // namespace divexplore
