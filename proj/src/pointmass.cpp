#include "divexplore/pointmass.hpp"

#include <cmath>
#include <stdexcept>

namespace divexplore {

void PointMassConfig::validate() const {
  if (half_width <= 0.0) throw std::invalid_argument("pointmass: half_width must be > 0");
  if (action_bound <= 0.0) throw std::invalid_argument("pointmass: action_bound must be > 0");
  if (threshold <= 0.0 || threshold >= half_width)
    throw std::invalid_argument("pointmass: threshold must be in (0, half_width)");
  if (horizon <= 0) throw std::invalid_argument("pointmass: horizon must be > 0");
  if (!randomize_target && target.norm() <= threshold)
    throw std::invalid_argument("pointmass: target within threshold of the start");
}

PointMass::PointMass(const PointMassConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), rng_(seed) {
  cfg_.validate();
  reset();
}

Eigen::Vector2d PointMass::reset() {
  position_.setZero();
  steps_ = 0;
  if (cfg_.randomize_target) {
    std::uniform_real_distribution<double> dist(-0.9 * cfg_.half_width,
                                                0.9 * cfg_.half_width);
    do {
      target_ = Eigen::Vector2d(dist(rng_), dist(rng_));
    } while (target_.norm() <= 4.0 * cfg_.threshold);
  } else {
    target_ = cfg_.target;
  }
  return position_;
}

PointMassStepResult PointMass::step(const Eigen::Vector2d& action) {
  if (!action.allFinite()) throw std::invalid_argument("pointmass: non-finite action");
  const Eigen::Vector2d clamped =
      action.cwiseMax(-cfg_.action_bound).cwiseMin(cfg_.action_bound);
  position_ += clamped;
  position_ = position_.cwiseMax(-cfg_.half_width).cwiseMin(cfg_.half_width);
  ++steps_;

  PointMassStepResult result;
  result.next = position_;
  if ((position_ - target_).norm() < cfg_.threshold) {
    result.reward = 1.0;
    result.done = true;
  } else {
    result.done = steps_ >= cfg_.horizon;
  }
  return result;
}

Eigen::Vector4d PointMass::observation() const {
  Eigen::Vector4d obs;
  obs << position_.x() / cfg_.half_width, position_.y() / cfg_.half_width,
      target_.x() / cfg_.half_width, target_.y() / cfg_.half_width;
  return obs;
}

}  // namespace divexplore
