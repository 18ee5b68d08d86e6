#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace divexplore {

/// Sparse-reward continuous control: a point mass in a square arena gets
/// +1 only when it moves within `threshold` of the target, nothing
/// otherwise. Actions are per-axis displacements clamped to +/- bound.
struct PointMassConfig {
  double half_width = 1.0;
  double action_bound = 0.05;
  Eigen::Vector2d target{0.65, 0.65};
  bool randomize_target = false;  // resample target each reset (seeded)
  double threshold = 0.05;
  int horizon = 200;

  void validate() const;
};

struct PointMassStepResult {
  Eigen::Vector2d next;
  double reward = 0.0;
  bool done = false;
};

class PointMass {
 public:
  explicit PointMass(const PointMassConfig& cfg, std::uint64_t seed = 0);

  const PointMassConfig& config() const { return cfg_; }
  const Eigen::Vector2d& position() const { return position_; }
  const Eigen::Vector2d& target() const { return target_; }
  int steps_taken() const { return steps_; }

  Eigen::Vector2d reset();
  PointMassStepResult step(const Eigen::Vector2d& action);

  /// Observation: [x, y, target_x, target_y] scaled by the arena half-width.
  Eigen::Vector4d observation() const;

 private:
  PointMassConfig cfg_;
  Eigen::Vector2d position_{0.0, 0.0};
  Eigen::Vector2d target_{0.0, 0.0};
  std::mt19937_64 rng_;
  int steps_ = 0;
};

}  // namespace divexplore
