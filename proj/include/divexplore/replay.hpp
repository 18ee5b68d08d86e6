#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

namespace divexplore {

/// One replay record. Discrete agents fill action_index; continuous agents
/// fill action_vec. prior_q snapshots the acting network's full Q-vector at
/// storage time (diversity-DQN only).
struct Transition {
  Eigen::VectorXd state;
  int action_index = -1;
  Eigen::VectorXd action_vec;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool done = false;
  std::optional<Eigen::VectorXd> prior_q;
};

/// Fixed-capacity ring buffer with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  /// action_count > 0 pins the length any stored prior_q must have.
  explicit ReplayBuffer(std::size_t capacity, int action_count = 0);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return storage_[i]; }

  /// Deep-copies t; evicts the oldest record once full. Rejects non-finite
  /// fields and wrong-length prior_q.
  void push(const Transition& t);

  /// batch_size uniform draws with replacement. Rejects an empty buffer.
  std::vector<const Transition*> sample_uniform(std::size_t batch_size,
                                                std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  int action_count_;
  std::vector<Transition> storage_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
};

}  // namespace divexplore
