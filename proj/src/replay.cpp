#include "divexplore/replay.hpp"

#include <cmath>
#include <stdexcept>

namespace divexplore {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int action_count)
    : capacity_(capacity), action_count_(action_count) {
  if (capacity_ == 0) throw std::invalid_argument("replay: capacity must be > 0");
  storage_.reserve(std::min<std::size_t>(capacity_, 1 << 16));
}

void ReplayBuffer::push(const Transition& t) {
  if (!t.state.allFinite() || !t.next_state.allFinite() || !std::isfinite(t.reward))
    throw std::invalid_argument("replay: non-finite transition field");
  if (t.action_vec.size() > 0 && !t.action_vec.allFinite())
    throw std::invalid_argument("replay: non-finite action");
  if (t.prior_q) {
    if (!t.prior_q->allFinite())
      throw std::invalid_argument("replay: non-finite prior_q");
    if (action_count_ > 0 && t.prior_q->size() != action_count_)
      throw std::invalid_argument("replay: prior_q length does not match action count");
  }

  if (size_ < capacity_) {
    storage_.push_back(t);
    ++size_;
  } else {
    storage_[cursor_] = t;
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample_uniform(
    std::size_t batch_size, std::mt19937_64& rng) const {
  if (size_ == 0) throw std::logic_error("replay: cannot sample from empty buffer");
  std::uniform_int_distribution<std::size_t> dist(0, size_ - 1);
  std::vector<const Transition*> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i)
    batch.push_back(&storage_[dist(rng)]);
  return batch;
}

}  // namespace divexplore
