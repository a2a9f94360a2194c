#include "symrl/replay.hpp"

#include <algorithm>
#include <stdexcept>

namespace symrl {

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  entries_.reserve(std::min(capacity, 1 << 16));
}

void ReplayBuffer::push(Transition transition) {
  if (size() < capacity_) {
    entries_.push_back(std::move(transition));
  } else {
    entries_[write_pos_] = std::move(transition);
  }
  write_pos_ = (write_pos_ + 1) % capacity_;
}

std::vector<int> ReplayBuffer::sample_indices(int batch, Rng& rng) const {
  const int n = size();
  if (batch < 1 || batch > n)
    throw std::invalid_argument("ReplayBuffer: batch size exceeds stored transitions");
  // Floyd's sampling: `batch` distinct indices, each subset equally likely.
  std::vector<int> picked;
  picked.reserve(batch);
  for (int j = n - batch; j < n; ++j) {
    const int t = rng.uniform_int(j + 1);
    if (std::find(picked.begin(), picked.end(), t) == picked.end())
      picked.push_back(t);
    else
      picked.push_back(j);
  }
  return picked;
}

}  // namespace symrl
