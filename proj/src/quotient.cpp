#include "symrl/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace symrl {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("build_quotient: " + msg); }

}  // namespace

Quotient build_quotient(const TabularMDP& mdp, const Partition& classes, double tol) {
  if (classes.universe_size != mdp.pair_count())
    fail("class partition universe does not match the admissible pair count");
  Partition state_blocks = project_partition(classes, mdp.admissible(), mdp.state_count());
  const int n_blocks = state_blocks.block_count;
  const int n_classes = classes.block_count;
  const int n_states = mdp.state_count();
  const auto members_per_class = classes.blocks();

  // Aggregate each pair's transition row over state blocks; all members of a
  // class must agree on both the probability mass and the probability-
  // weighted reward per block.
  std::vector<std::vector<double>> t_ref(n_classes), rw_ref(n_classes);
  std::vector<std::vector<int>> blocks_of_class(n_classes);
  for (int c = 0; c < n_classes; ++c) {
    for (int pid : members_per_class[c]) {
      std::vector<double> t(n_blocks, 0.0), rw(n_blocks, 0.0);
      const auto& t_row = mdp.transition_row(pid);
      const auto& r_row = mdp.reward_row(pid);
      for (int next = 0; next < n_states; ++next) {
        int b = state_blocks.block_of[next];
        t[b] += t_row[next];
        rw[b] += t_row[next] * r_row[next];
      }
      if (t_ref[c].empty()) {
        t_ref[c] = std::move(t);
        rw_ref[c] = std::move(rw);
      } else {
        for (int b = 0; b < n_blocks; ++b)
          if (std::abs(t[b] - t_ref[c][b]) > tol || std::abs(rw[b] - rw_ref[c][b]) > tol) {
            auto [s, a] = mdp.pair(pid);
            fail("class " + std::to_string(c) + " is inconsistent at pair (" + std::to_string(s) +
                 "," + std::to_string(a) + ")");
          }
      }
      blocks_of_class[c].push_back(state_blocks.block_of[mdp.pair(pid).first]);
    }
    auto& blocks = blocks_of_class[c];
    std::sort(blocks.begin(), blocks.end());
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  }

  TabularMDP quotient_mdp(n_blocks, n_classes);
  {
    std::vector<char> all_terminal(n_blocks, 1);
    for (int s = 0; s < n_states; ++s)
      if (!mdp.is_terminal(s)) all_terminal[state_blocks.block_of[s]] = 0;
    for (int b = 0; b < n_blocks; ++b)
      if (all_terminal[b]) quotient_mdp.set_terminal(b);
  }
  for (int c = 0; c < n_classes; ++c)
    for (int b : blocks_of_class[c])
      for (int b2 = 0; b2 < n_blocks; ++b2)
        if (t_ref[c][b2] > 0)
          quotient_mdp.add_transition(b, c, b2, t_ref[c][b2], rw_ref[c][b2] / t_ref[c][b2]);
  quotient_mdp.freeze(std::max(tol, 1e-12));

  return Quotient{std::move(quotient_mdp), std::move(state_blocks), classes};
}

std::vector<double> lift_q(const Quotient& quotient, const TabularMDP& original,
                           const std::vector<double>& quotient_q) {
  if (quotient.classes.universe_size != original.pair_count())
    throw std::invalid_argument("lift_q: quotient was built from a different MDP");
  if (static_cast<int>(quotient_q.size()) != quotient.mdp.pair_count())
    throw std::invalid_argument("lift_q: Q-table size does not match the quotient");
  std::vector<double> lifted(original.pair_count());
  for (int pid = 0; pid < original.pair_count(); ++pid) {
    int block = quotient.state_blocks.block_of[original.pair(pid).first];
    int cls = quotient.classes.block_of[pid];
    lifted[pid] = quotient_q[quotient.mdp.pair_id(block, cls)];
  }
  return lifted;
}

}  // namespace symrl
