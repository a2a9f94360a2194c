#pragma once

#include "symrl/rng.hpp"
#include "symrl/sa_key.hpp"

#include <memory>
#include <vector>

namespace symrl {

// How a Q-network consumes an environment's observations: one scalar output
// per encoded (state, action) pair, or one output per action from an encoded
// state.
enum class QLayout { PerPair, PerState };

struct StepResult {
  double base_reward = 0.0;
  double shaped_reward = 0.0;
  bool terminated = false;
  bool truncated = false;
};

// Episodic environment driven by an external random stream. One instance
// serves one sequential run.
class Env {
 public:
  virtual ~Env() = default;

  virtual int action_count() const = 0;
  virtual int observation_size() const = 0;
  virtual int input_size() const = 0;
  virtual QLayout q_layout() const = 0;

  virtual void reset(Rng& rng) = 0;
  virtual StepResult step(int action, Rng& rng) = 0;
  virtual std::vector<double> observation() const = 0;
  virtual bool done() const = 0;
  virtual int steps() const = 0;

  // Network input for (observation, action); PerState layouts ignore action.
  virtual void encode(const double* obs, int action, double* out) const = 0;
  virtual SAKey discrete_key(const double* obs, int action) const = 0;
};

}  // namespace symrl
