#pragma once

#include "symrl/env.hpp"
#include "symrl/mlp.hpp"
#include "symrl/replay.hpp"
#include "symrl/reward_tree.hpp"
#include "symrl/similarity.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace symrl {

struct EpsilonSchedule {
  double start = 0.1;
  double floor = 0.1;
  double decay_rate = 1.0;
};

// epsilon(episode) = max(floor, start * decay_rate^episode).
double epsilon_at(const EpsilonSchedule& schedule, int episode);

struct DetectorConfig {
  bool enabled = true;
  double delta = 0.8;
  int l0 = 1;
  int i = 5;
  std::int64_t min_support = 20;
  int partner_cap = 5;
  double reward_quantum = 1e-6;
  int node_entry_cap = 512;
  int recompute_period = 1;  // episodes between full index rebuilds
};

struct AgentConfig {
  double gamma = 0.99;
  double lambda_sym = 1.0;  // weight of the symmetric update; 0 disables it
  int batch_size = 128;
  int warmup_episodes = 25;  // fully random policy, no gradient updates
  double learning_rate = 0.001;
  int target_refresh_period = 1;  // 1 = bootstrap from the previous iterate
  int replay_capacity = 100000;
  std::vector<int> hidden_sizes = {100, 100};
  EpsilonSchedule epsilon;
  DetectorConfig detector;
  std::uint64_t init_seed = 0;
};

// Uniform random action with probability epsilon, otherwise the argmax
// (ties to the lowest index). epsilon == 0 consumes no randomness.
int select_action(const std::vector<double>& q_values, double epsilon, Rng& rng);

struct EpisodeStats {
  int episode = 0;
  int steps = 0;
  double base_return = 0.0;
  double shaped_return = 0.0;
  double epsilon = 0.0;
  double td_loss_mean = 0.0;
  double sym_loss_mean = 0.0;
  std::int64_t sym_updates = 0;  // partner columns trained on
  int partner_pairs = 0;         // symmetric pairs in the index
  int tree_nodes = 0;
  int tree_keys = 0;
};

struct GreedyEpisodeResult {
  int steps = 0;
  bool terminated = false;
};

// Q-learning agent with replay, a bootstrapped target network, and the
// optional symmetry-regularized second update. With lambda_sym == 0 and the
// detector disabled this is the plain DQN baseline, consuming an identical
// random stream.
class Agent {
 public:
  Agent(const Env& env, const AgentConfig& config);

  EpisodeStats run_episode(Env& env, Rng& rng);

  // Greedy rollout (epsilon = 0) without learning or detector updates.
  GreedyEpisodeResult run_greedy_episode(Env& env, Rng& rng) const;

  // Same, but from the environment's current state; the caller resets first
  // (and may inspect the start state before rolling out).
  GreedyEpisodeResult greedy_rollout(Env& env, Rng& rng) const;

  std::vector<double> q_values(const Env& env, const std::vector<double>& obs) const;

  const MLP& network() const { return net_; }
  MLP& network() { return net_; }
  const RewardHistoryTree& tree() const { return tree_; }
  const SymmetryIndex& index() const { return index_; }
  const ReplayBuffer& replay() const { return replay_; }
  int episodes_run() const { return episodes_run_; }
  const AgentConfig& config() const { return config_; }

 private:
  struct TrainResult {
    double td_loss = 0.0;
    double sym_loss = 0.0;
    int sym_columns = 0;
    bool trained = false;
  };
  TrainResult train_step(const Env& env, Rng& rng);

  AgentConfig config_;
  QLayout layout_;
  MLP net_;
  MLP target_net_;
  ReplayBuffer replay_;
  RewardHistoryTree tree_;
  SymmetryIndex index_;
  GradientBuffer td_grads_;
  GradientBuffer sym_grads_;
  int episodes_run_ = 0;
  std::int64_t train_steps_ = 0;
};

}  // namespace symrl
