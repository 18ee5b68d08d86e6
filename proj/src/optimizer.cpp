#include "divexplore/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace divexplore {

void Optimizer::step(Mlp& net, const Gradients& grads) {
  auto& layers = net.layers();
  if (grads.weight.size() != layers.size())
    throw std::invalid_argument("Optimizer::step: gradient layer count mismatch");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (grads.weight[k].rows() != layers[k].weight.rows() ||
        grads.weight[k].cols() != layers[k].weight.cols() ||
        grads.bias[k].size() != layers[k].bias.size())
      throw std::invalid_argument("Optimizer::step: gradient shape mismatch");
  }

  if (cfg_.kind == OptimizerKind::Sgd) {
    for (std::size_t k = 0; k < layers.size(); ++k) {
      layers[k].weight -= cfg_.learning_rate * grads.weight[k];
      layers[k].bias -= cfg_.learning_rate * grads.bias[k];
    }
    ++step_count_;
    return;
  }

  if (!initialized_) {
    m_ = net.zero_gradients();
    v_ = net.zero_gradients();
    initialized_ = true;
  }
  ++step_count_;
  const double t = static_cast<double>(step_count_);
  const double bc1 = 1.0 - std::pow(cfg_.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, t);
  for (std::size_t k = 0; k < layers.size(); ++k) {
    m_.weight[k] = cfg_.beta1 * m_.weight[k] + (1.0 - cfg_.beta1) * grads.weight[k];
    v_.weight[k] = cfg_.beta2 * v_.weight[k].array().matrix() +
                   (1.0 - cfg_.beta2) * grads.weight[k].array().square().matrix();
    m_.bias[k] = cfg_.beta1 * m_.bias[k] + (1.0 - cfg_.beta1) * grads.bias[k];
    v_.bias[k] = cfg_.beta2 * v_.bias[k].array().matrix() +
                 (1.0 - cfg_.beta2) * grads.bias[k].array().square().matrix();

    layers[k].weight.array() -=
        cfg_.learning_rate * (m_.weight[k].array() / bc1) /
        ((v_.weight[k].array() / bc2).sqrt() + cfg_.epsilon);
    layers[k].bias.array() -=
        cfg_.learning_rate * (m_.bias[k].array() / bc1) /
        ((v_.bias[k].array() / bc2).sqrt() + cfg_.epsilon);
  }
}

}  // namespace divexplore
