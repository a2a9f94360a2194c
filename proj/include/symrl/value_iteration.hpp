#pragma once

#include "symrl/tabular_mdp.hpp"

#include <vector>

namespace symrl {

// Exact Bellman-optimality solve. Returns Q indexed by admissible pair id,
// accurate to tol in sup-norm. gamma may be 1 only when the MDP is
// absorbing (all value mass drains into terminal states); failure to
// converge then raises std::runtime_error.
std::vector<double> value_iteration(const TabularMDP& mdp, double gamma,
                                    double tol = 1e-9, int max_iterations = 1000000);

// Greedy state values V(s) = max_a Q(s, a); 0 where no action is admissible.
std::vector<double> state_values(const TabularMDP& mdp, const std::vector<double>& q);

// Per-state sets of actions within tie_tol of the best Q-value, ascending.
std::vector<std::vector<int>> greedy_action_sets(const TabularMDP& mdp,
                                                 const std::vector<double>& q,
                                                 double tie_tol = 1e-6);

}  // namespace symrl
