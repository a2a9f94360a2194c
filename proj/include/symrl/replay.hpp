#pragma once

#include "symrl/rng.hpp"

#include <vector>

namespace symrl {

struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;  // the reward the agent trains on (shaped when enabled)
  std::vector<double> next_state;
  bool terminated = false;
};

// Fixed-capacity ring of transitions with uniform batch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity);

  void push(Transition transition);
  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  const Transition& operator[](int index) const { return entries_[index]; }

  // `batch` distinct indices, uniform without replacement.
  std::vector<int> sample_indices(int batch, Rng& rng) const;

 private:
  int capacity_;
  int write_pos_ = 0;
  std::vector<Transition> entries_;
};

}  // namespace symrl
