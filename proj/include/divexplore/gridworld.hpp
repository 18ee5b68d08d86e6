#pragma once

#include <Eigen/Dense>

namespace divexplore {

enum class GridAction : int { North = 0, South = 1, West = 2, East = 3 };
inline constexpr int kGridActionCount = 4;

enum class RewardMode { Deceptive, Sparse };

/// Deceptive/sparse gridworld. The agent starts at the top-left corner,
/// the goal reward sits at the bottom-right corner, and in deceptive mode a
/// solid central square of small rewards lies in between. Episodes end as
/// soon as any reward is collected or the horizon runs out.
struct GridWorldConfig {
  int width = 50;
  int height = 50;
  RewardMode mode = RewardMode::Sparse;
  double deceptive_reward = 0.001;
  double goal_reward = 1.0;
  int horizon = 0;  // 0 -> default 4 * (width + height)

  int effective_horizon() const {
    return horizon > 0 ? horizon : 4 * (width + height);
  }
  // Central square, side = ceil(size/5) per axis.
  int region_row0() const { return (height - region_rows()) / 2; }
  int region_col0() const { return (width - region_cols()) / 2; }
  int region_rows() const { return (height + 4) / 5; }
  int region_cols() const { return (width + 4) / 5; }

  void validate() const;  // throws std::invalid_argument on violation
};

struct GridState {
  int row = 0;
  int col = 0;
  bool operator==(const GridState&) const = default;
};

struct GridStepResult {
  GridState next;
  double reward = 0.0;
  bool done = false;
};

class GridWorld {
 public:
  explicit GridWorld(const GridWorldConfig& cfg);

  const GridWorldConfig& config() const { return cfg_; }
  const GridState& state() const { return state_; }
  int steps_taken() const { return steps_; }

  GridState reset();
  GridStepResult step(GridAction action);

  /// Coordinates normalized into [0,1]^2: [row/(h-1), col/(w-1)].
  Eigen::Vector2d observation() const { return observation(cfg_, state_); }
  static Eigen::Vector2d observation(const GridWorldConfig& cfg, const GridState& s);

  bool in_deceptive_region(const GridState& s) const;

 private:
  GridWorldConfig cfg_;
  GridState state_;
  int steps_ = 0;
};

}  // namespace divexplore
