#include "divexplore/gridworld.hpp"

#include <stdexcept>

namespace divexplore {

void GridWorldConfig::validate() const {
  if (width < 2 || height < 2)
    throw std::invalid_argument("gridworld: width/height must be >= 2");
  if (effective_horizon() < width + height)
    throw std::invalid_argument("gridworld: horizon must be >= width + height");
  const int r0 = region_row0(), c0 = region_col0();
  const int r1 = r0 + region_rows() - 1, c1 = c0 + region_cols() - 1;
  auto inside = [&](int r, int c) { return r >= r0 && r <= r1 && c >= c0 && c <= c1; };
  if (inside(0, 0))
    throw std::invalid_argument("gridworld: start cell inside deceptive region");
  if (inside(height - 1, width - 1))
    throw std::invalid_argument("gridworld: goal cell inside deceptive region");
}

GridWorld::GridWorld(const GridWorldConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  reset();
}

GridState GridWorld::reset() {
  state_ = GridState{0, 0};
  steps_ = 0;
  return state_;
}

bool GridWorld::in_deceptive_region(const GridState& s) const {
  return s.row >= cfg_.region_row0() &&
         s.row < cfg_.region_row0() + cfg_.region_rows() &&
         s.col >= cfg_.region_col0() &&
         s.col < cfg_.region_col0() + cfg_.region_cols();
}

GridStepResult GridWorld::step(GridAction action) {
  GridState next = state_;
  switch (action) {
    case GridAction::North: next.row -= 1; break;
    case GridAction::South: next.row += 1; break;
    case GridAction::West: next.col -= 1; break;
    case GridAction::East: next.col += 1; break;
    default: throw std::invalid_argument("gridworld: invalid action");
  }
  // Walls clamp: moving off the map is a no-op.
  if (next.row < 0) next.row = 0;
  if (next.row >= cfg_.height) next.row = cfg_.height - 1;
  if (next.col < 0) next.col = 0;
  if (next.col >= cfg_.width) next.col = cfg_.width - 1;

  ++steps_;
  state_ = next;

  GridStepResult result;
  result.next = next;
  if (next.row == cfg_.height - 1 && next.col == cfg_.width - 1) {
    result.reward = cfg_.goal_reward;
  } else if (cfg_.mode == RewardMode::Deceptive && in_deceptive_region(next)) {
    result.reward = cfg_.deceptive_reward;
  }
  result.done = result.reward != 0.0 || steps_ >= cfg_.effective_horizon();
  return result;
}

Eigen::Vector2d GridWorld::observation(const GridWorldConfig& cfg, const GridState& s) {
  return Eigen::Vector2d(static_cast<double>(s.row) / (cfg.height - 1),
                         static_cast<double>(s.col) / (cfg.width - 1));
}

}  // namespace divexplore
