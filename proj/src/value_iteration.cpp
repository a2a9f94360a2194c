#include "symrl/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace symrl {

std::vector<double> value_iteration(const TabularMDP& mdp, double gamma, double tol,
                                    int max_iterations) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("value_iteration: gamma must lie in [0, 1]");
  if (tol <= 0) throw std::invalid_argument("value_iteration: tol must be positive");

  // Stopping on a residual of tol*(1-gamma) bounds the final sup-norm error
  // by tol; with gamma == 1 there is no contraction bound, so iterate to the
  // raw residual and insist on convergence within the iteration budget.
  const double target_residual = gamma < 1.0 ? tol * (1.0 - gamma) : tol;

  const int pairs = mdp.pair_count();
  std::vector<double> q(pairs, 0.0);
  std::vector<double> v(mdp.state_count(), 0.0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    double residual = 0.0;
    for (int pid = 0; pid < pairs; ++pid) {
      const auto& t = mdp.transition_row(pid);
      const auto& r = mdp.reward_row(pid);
      double backup = 0.0;
      for (int next = 0; next < mdp.state_count(); ++next)
        if (t[next] > 0) backup += t[next] * (r[next] + gamma * v[next]);
      residual = std::max(residual, std::abs(backup - q[pid]));
      q[pid] = backup;
    }
    for (int s = 0; s < mdp.state_count(); ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a : mdp.actions_at(s)) best = std::max(best, q[mdp.pair_id(s, a)]);
      v[s] = mdp.actions_at(s).empty() ? 0.0 : best;
    }
    if (residual <= target_residual) return q;
  }
  throw std::runtime_error("value_iteration: no convergence within the iteration budget");
}

std::vector<double> state_values(const TabularMDP& mdp, const std::vector<double>& q) {
  std::vector<double> v(mdp.state_count(), 0.0);
  for (int s = 0; s < mdp.state_count(); ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a : mdp.actions_at(s)) best = std::max(best, q[mdp.pair_id(s, a)]);
    if (!mdp.actions_at(s).empty()) v[s] = best;
  }
  return v;
}

std::vector<std::vector<int>> greedy_action_sets(const TabularMDP& mdp,
                                                 const std::vector<double>& q,
                                                 double tie_tol) {
  const auto v = state_values(mdp, q);
  std::vector<std::vector<int>> sets(mdp.state_count());
  for (int s = 0; s < mdp.state_count(); ++s)
    for (int a : mdp.actions_at(s))
      if (q[mdp.pair_id(s, a)] >= v[s] - tie_tol) sets[s].push_back(a);
  return sets;
}

}  // namespace symrl
