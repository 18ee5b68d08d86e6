#pragma once

namespace divexplore {

enum class AlphaMode { Fixed, Linear, Distance };
enum class PerformanceMode { Proactive, Reactive };

struct AlphaSchedulerConfig {
  AlphaMode mode = AlphaMode::Distance;
  double alpha0 = 0.1;
  long total_steps = 1;   // linear mode: anneal horizon T
  double delta = 0.05;    // distance mode: threshold on the mean distance
  double up_factor = 1.01;
  double down_factor = 0.99;
  double alpha_min = 1e-4;
  double alpha_max = 1.0;
};

/// Scaling factor for the diversity term. Fixed keeps alpha0, linear anneals
/// alpha0 -> 0 over total_steps, distance grows/shrinks alpha by 1.01/0.99
/// around the threshold delta (inclusive on the grow side).
class AlphaScheduler {
 public:
  AlphaScheduler() : AlphaScheduler(AlphaSchedulerConfig{}) {}
  explicit AlphaScheduler(const AlphaSchedulerConfig& cfg);

  double alpha() const { return alpha_; }
  const AlphaSchedulerConfig& config() const { return cfg_; }

  /// Distance mode: one multiplicative update from the mean distance of the
  /// latest training batch. No-op in other modes.
  void observe_distance(double mean_distance);

  /// Linear mode: recompute alpha for timestep t. No-op in other modes.
  void advance(long t);

 private:
  AlphaSchedulerConfig cfg_;
  double alpha_ = 0.0;
};

/// alpha0 * (1 - t/T), zero past T.
double linear_alpha(double alpha0, long t, long total_steps);

/// Per-snapshot factor from normalized snapshot performance.
/// Proactive maps [P_min, P_max] onto [+1, -1], reactive onto [+1, 0].
/// Degenerate P_max == P_min yields 0 in both modes.
double performance_alpha(double performance, double p_min, double p_max,
                         PerformanceMode mode);

/// min(max(d, -c), c); c must be positive.
double clip_distance(double d, double c);

}  // namespace divexplore
