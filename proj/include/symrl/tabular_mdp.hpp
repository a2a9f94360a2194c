#pragma once

#include <string>
#include <utility>
#include <vector>

namespace symrl {

// Explicit finite MDP <S, A, Psi, T, R>. Construction is two-phase: add
// transitions, then freeze(). Freezing assigns pair ids in (state, action)
// order, normalizes accumulated rewards, and validates the invariants
// (row-stochastic transitions, terminal states absorbing with zero reward,
// non-terminal states with at least one admissible action).
class TabularMDP {
 public:
  static constexpr double kDefaultTol = 1e-9;

  TabularMDP(int state_count, int action_count);

  // Accumulates probability mass on (s, a) -> next. Repeated calls add up;
  // the stored reward becomes the probability-weighted mean of the rewards
  // supplied for that triple. Calls with prob == 0 are ignored.
  void add_transition(int s, int a, int next, double prob, double reward = 0.0);

  // Marks s terminal. Absorbing zero-reward self-loops for every action are
  // installed at freeze() unless s already has admissible pairs.
  void set_terminal(int s);

  void freeze(double tol = kDefaultTol);
  bool frozen() const { return frozen_; }

  int state_count() const { return state_count_; }
  int action_count() const { return action_count_; }
  int pair_count() const { return static_cast<int>(admissible_.size()); }

  bool is_terminal(int s) const { return terminal_[s]; }
  bool is_admissible(int s, int a) const { return pair_id(s, a) >= 0; }
  int pair_id(int s, int a) const;  // -1 when (s, a) is inadmissible
  const std::pair<int, int>& pair(int pid) const { return admissible_[pid]; }
  const std::vector<std::pair<int, int>>& admissible() const { return admissible_; }
  const std::vector<int>& actions_at(int s) const;

  const std::vector<double>& transition_row(int pid) const { return transition_[pid]; }
  const std::vector<double>& reward_row(int pid) const { return reward_[pid]; }
  double transition(int s, int a, int next) const;
  double reward(int s, int a, int next) const;

  // Plain-text serialization: a header line, counts, the admissible pair
  // list, terminal ids, then one T row and one R row per pair. Round-trips
  // doubles exactly.
  std::string to_text() const;
  static TabularMDP from_text(const std::string& text);

 private:
  struct Accum {
    std::vector<double> prob;             // dense over next states
    std::vector<double> weighted_reward;  // sum of prob * reward
  };

  int require_pair(int s, int a) const;

  int state_count_ = 0;
  int action_count_ = 0;
  bool frozen_ = false;
  std::vector<char> terminal_;
  std::vector<Accum> accum_;                      // build phase, indexed like pair_slot_
  std::vector<int> pair_slot_;                    // s * action_count + a -> accum/pair index
  std::vector<std::pair<int, int>> admissible_;   // frozen, sorted
  std::vector<std::vector<double>> transition_;   // pid -> dense row over next states
  std::vector<std::vector<double>> reward_;       // pid -> dense row over next states
  std::vector<std::vector<int>> actions_at_;      // s -> admissible action ids, ascending
};

}  // namespace symrl
