#pragma once

#include "divexplore/mlp.hpp"

namespace divexplore {

enum class OptimizerKind { Sgd, Adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Parameter updater owning per-parameter Adam moments. Moments are lazily
/// sized to the first network stepped and must stay congruent afterwards.
class Optimizer {
 public:
  explicit Optimizer(const OptimizerConfig& cfg = {}) : cfg_(cfg) {}

  void step(Mlp& net, const Gradients& grads);
  long step_count() const { return step_count_; }
  const OptimizerConfig& config() const { return cfg_; }

 private:
  OptimizerConfig cfg_;
  long step_count_ = 0;
  Gradients m_;  // first moments
  Gradients v_;  // second moments
  bool initialized_ = false;
};

}  // namespace divexplore
