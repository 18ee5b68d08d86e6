#include "divexplore/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divexplore {

AlphaScheduler::AlphaScheduler(const AlphaSchedulerConfig& cfg) : cfg_(cfg) {
  if (cfg_.delta <= 0.0) throw std::invalid_argument("AlphaScheduler: delta must be > 0");
  if (cfg_.alpha_min > cfg_.alpha_max)
    throw std::invalid_argument("AlphaScheduler: alpha bounds inverted");
  alpha_ = cfg_.alpha0;
  if (cfg_.mode == AlphaMode::Distance)
    alpha_ = std::clamp(alpha_, cfg_.alpha_min, cfg_.alpha_max);
}

void AlphaScheduler::observe_distance(double mean_distance) {
  if (cfg_.mode != AlphaMode::Distance) return;
  if (!std::isfinite(mean_distance))
    throw std::invalid_argument("observe_distance: non-finite distance");
  alpha_ *= (mean_distance <= cfg_.delta) ? cfg_.up_factor : cfg_.down_factor;
  alpha_ = std::clamp(alpha_, cfg_.alpha_min, cfg_.alpha_max);
}

void AlphaScheduler::advance(long t) {
  if (cfg_.mode != AlphaMode::Linear) return;
  alpha_ = linear_alpha(cfg_.alpha0, t, cfg_.total_steps);
}

double linear_alpha(double alpha0, long t, long total_steps) {
  if (total_steps <= 0) throw std::invalid_argument("linear_alpha: T must be > 0");
  if (t >= total_steps) return 0.0;
  return alpha0 * (1.0 - static_cast<double>(t) / static_cast<double>(total_steps));
}

double performance_alpha(double performance, double p_min, double p_max,
                         PerformanceMode mode) {
  if (performance < p_min || performance > p_max)
    throw std::invalid_argument("performance_alpha: P outside [P_min, P_max]");
  if (p_max == p_min) return 0.0;
  const double normalized = (performance - p_min) / (p_max - p_min);
  return mode == PerformanceMode::Proactive ? -(2.0 * normalized - 1.0)
                                            : 1.0 - normalized;
}

double clip_distance(double d, double c) {
  if (c <= 0.0) throw std::invalid_argument("clip_distance: c must be > 0");
  return std::min(std::max(d, -c), c);
}

}  // namespace divexplore
