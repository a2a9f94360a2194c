#include "symrl/symmetry_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace symrl {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("SymmetryMap: " + msg); }

// Validates shapes and bijectivity; throws on structural problems.
void validate_structure(const TabularMDP& mdp, const SymmetryMap& sym) {
  const int s_count = mdp.state_count();
  if (static_cast<int>(sym.f.size()) != s_count) fail("f has wrong size");
  if (static_cast<int>(sym.g.size()) != s_count) fail("g has wrong size");
  std::vector<char> hit(s_count, 0);
  for (int s = 0; s < s_count; ++s) {
    int fs = sym.f[s];
    if (fs < 0 || fs >= s_count) fail("f maps state " + std::to_string(s) + " out of range");
    if (hit[fs]) fail("f is not a bijection");
    hit[fs] = 1;
    if (static_cast<int>(sym.g[s].size()) != mdp.action_count())
      fail("g[" + std::to_string(s) + "] has wrong size");
    std::vector<char> used(mdp.action_count(), 0);
    for (int a : mdp.actions_at(s)) {
      int ga = sym.g[s][a];
      if (ga < 0 || ga >= mdp.action_count())
        fail("g maps action out of range at state " + std::to_string(s));
      if (used[ga]) fail("g[" + std::to_string(s) + "] is not injective on admissible actions");
      used[ga] = 1;
      if (!mdp.is_admissible(fs, ga))
        fail("image of admissible pair (" + std::to_string(s) + "," + std::to_string(a) +
             ") is inadmissible");
    }
  }
}

}  // namespace

SymmetryMap SymmetryMap::identity(const TabularMDP& mdp) {
  SymmetryMap sym;
  sym.f.resize(mdp.state_count());
  std::iota(sym.f.begin(), sym.f.end(), 0);
  std::vector<int> all(mdp.action_count());
  std::iota(all.begin(), all.end(), 0);
  sym.g.assign(mdp.state_count(), all);
  return sym;
}

bool check_symmetry(const TabularMDP& mdp, const SymmetryMap& sym, double tol) {
  validate_structure(mdp, sym);
  for (const auto& [s, a] : mdp.admissible()) {
    const auto& t = mdp.transition_row(mdp.pair_id(s, a));
    const auto& r = mdp.reward_row(mdp.pair_id(s, a));
    auto [fs, ga] = sym.apply(s, a);
    const auto& t_img = mdp.transition_row(mdp.pair_id(fs, ga));
    const auto& r_img = mdp.reward_row(mdp.pair_id(fs, ga));
    for (int next = 0; next < mdp.state_count(); ++next) {
      int f_next = sym.f[next];
      if (std::abs(t_img[f_next] - t[next]) > tol) return false;
      // Rewards are compared only on the transition support; entries with
      // zero probability carry no information.
      if ((t[next] > tol || t_img[f_next] > tol) && std::abs(r_img[f_next] - r[next]) > tol)
        return false;
    }
  }
  return true;
}

Partition equivalence_classes(const TabularMDP& mdp, const SymmetryMap& sym, double tol) {
  if (!check_symmetry(mdp, sym, tol))
    fail("equivalence_classes requires a verified symmetry");
  const int pairs = mdp.pair_count();
  std::vector<int> parent(pairs);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int pid = 0; pid < pairs; ++pid) {
    auto [s, a] = mdp.pair(pid);
    auto [fs, ga] = sym.apply(s, a);
    int ra = find(pid);
    int rb = find(mdp.pair_id(fs, ga));
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<int> assignment(pairs);
  for (int pid = 0; pid < pairs; ++pid) assignment[pid] = find(pid);
  return Partition::from_block_of(assignment);
}

}  // namespace symrl
