#include "symrl/tabular_mdp.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace symrl {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("TabularMDP: " + msg); }

}  // namespace

TabularMDP::TabularMDP(int state_count, int action_count)
    : state_count_(state_count), action_count_(action_count) {
  if (state_count <= 0 || action_count <= 0) fail("state_count and action_count must be positive");
  terminal_.assign(state_count, 0);
  pair_slot_.assign(static_cast<std::size_t>(state_count) * action_count, -1);
}

void TabularMDP::add_transition(int s, int a, int next, double prob, double reward) {
  if (frozen_) fail("add_transition after freeze");
  if (s < 0 || s >= state_count_ || next < 0 || next >= state_count_) fail("state out of range");
  if (a < 0 || a >= action_count_) fail("action out of range");
  if (!std::isfinite(prob) || !std::isfinite(reward)) fail("non-finite transition entry");
  if (prob < 0) fail("negative probability");
  if (prob == 0) return;
  int& slot = pair_slot_[static_cast<std::size_t>(s) * action_count_ + a];
  if (slot < 0) {
    slot = static_cast<int>(accum_.size());
    accum_.push_back({std::vector<double>(state_count_, 0.0), std::vector<double>(state_count_, 0.0)});
  }
  accum_[slot].prob[next] += prob;
  accum_[slot].weighted_reward[next] += prob * reward;
}

void TabularMDP::set_terminal(int s) {
  if (frozen_) fail("set_terminal after freeze");
  if (s < 0 || s >= state_count_) fail("state out of range");
  terminal_[s] = 1;
}

void TabularMDP::freeze(double tol) {
  if (frozen_) return;
  // Terminal states with no declared pairs become absorbing: zero-reward
  // self-loops under every action.
  for (int s = 0; s < state_count_; ++s) {
    if (!terminal_[s]) continue;
    bool has_pair = false;
    for (int a = 0; a < action_count_ && !has_pair; ++a)
      has_pair = pair_slot_[static_cast<std::size_t>(s) * action_count_ + a] >= 0;
    if (!has_pair)
      for (int a = 0; a < action_count_; ++a) add_transition(s, a, s, 1.0, 0.0);
  }

  actions_at_.assign(state_count_, {});
  for (int s = 0; s < state_count_; ++s) {
    for (int a = 0; a < action_count_; ++a) {
      int& slot = pair_slot_[static_cast<std::size_t>(s) * action_count_ + a];
      if (slot < 0) continue;
      Accum& acc = accum_[slot];
      double sum = 0;
      for (double p : acc.prob) sum += p;
      if (std::abs(sum - 1.0) > tol)
        fail("transition row for (" + std::to_string(s) + "," + std::to_string(a) +
             ") sums to " + std::to_string(sum));
      std::vector<double> rewards(state_count_, 0.0);
      for (int next = 0; next < state_count_; ++next)
        if (acc.prob[next] > 0) rewards[next] = acc.weighted_reward[next] / acc.prob[next];
      if (terminal_[s]) {
        if (std::abs(acc.prob[s] - 1.0) > tol)
          fail("terminal state " + std::to_string(s) + " is not absorbing");
        if (std::abs(rewards[s]) > tol)
          fail("terminal state " + std::to_string(s) + " has nonzero reward");
      }
      slot = pair_count();
      admissible_.emplace_back(s, a);
      transition_.push_back(std::move(acc.prob));
      reward_.push_back(std::move(rewards));
      actions_at_[s].push_back(a);
    }
    if (!terminal_[s] && actions_at_[s].empty())
      fail("non-terminal state " + std::to_string(s) + " has no admissible action");
  }
  accum_.clear();
  accum_.shrink_to_fit();
  frozen_ = true;
}

int TabularMDP::pair_id(int s, int a) const {
  if (!frozen_) fail("pair_id before freeze");
  if (s < 0 || s >= state_count_ || a < 0 || a >= action_count_) fail("pair out of range");
  return pair_slot_[static_cast<std::size_t>(s) * action_count_ + a];
}

const std::vector<int>& TabularMDP::actions_at(int s) const {
  if (!frozen_) fail("actions_at before freeze");
  if (s < 0 || s >= state_count_) fail("state out of range");
  return actions_at_[s];
}

int TabularMDP::require_pair(int s, int a) const {
  int pid = pair_id(s, a);
  if (pid < 0)
    fail("inadmissible pair (" + std::to_string(s) + "," + std::to_string(a) + ")");
  return pid;
}

double TabularMDP::transition(int s, int a, int next) const {
  return transition_[require_pair(s, a)][next];
}

double TabularMDP::reward(int s, int a, int next) const {
  return reward_[require_pair(s, a)][next];
}

std::string TabularMDP::to_text() const {
  if (!frozen_) fail("to_text before freeze");
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "symrl-mdp 1\n" << state_count_ << ' ' << action_count_ << '\n';
  out << pair_count() << '\n';
  for (const auto& [s, a] : admissible_) out << s << ' ' << a << '\n';
  int terminal_count = 0;
  for (char t : terminal_) terminal_count += t;
  out << terminal_count;
  for (int s = 0; s < state_count_; ++s)
    if (terminal_[s]) out << ' ' << s;
  out << '\n';
  for (const auto& row : transition_) {
    for (int next = 0; next < state_count_; ++next) out << (next ? " " : "") << row[next];
    out << '\n';
  }
  for (const auto& row : reward_) {
    for (int next = 0; next < state_count_; ++next) out << (next ? " " : "") << row[next];
    out << '\n';
  }
  return out.str();
}

TabularMDP TabularMDP::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "symrl-mdp" || version != 1) fail("from_text: bad header");
  int states = 0, actions = 0, pairs = 0;
  in >> states >> actions >> pairs;
  if (!in || states <= 0 || actions <= 0 || pairs < 0) fail("from_text: bad counts");
  std::vector<std::pair<int, int>> admissible(pairs);
  for (auto& [s, a] : admissible) in >> s >> a;
  int terminal_count = 0;
  in >> terminal_count;
  std::vector<int> terminals(terminal_count);
  for (int& s : terminals) in >> s;
  std::vector<std::vector<double>> t_rows(pairs, std::vector<double>(states));
  std::vector<std::vector<double>> r_rows(pairs, std::vector<double>(states));
  for (auto& row : t_rows)
    for (double& v : row) in >> v;
  for (auto& row : r_rows)
    for (double& v : row) in >> v;
  if (!in) fail("from_text: truncated body");

  TabularMDP mdp(states, actions);
  for (int s : terminals) mdp.set_terminal(s);
  for (int pid = 0; pid < pairs; ++pid) {
    auto [s, a] = admissible[pid];
    for (int next = 0; next < states; ++next)
      if (t_rows[pid][next] != 0)
        mdp.add_transition(s, a, next, t_rows[pid][next], r_rows[pid][next]);
  }
  mdp.freeze();
  return mdp;
}

}  // namespace symrl
