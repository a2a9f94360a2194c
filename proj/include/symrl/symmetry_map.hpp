#pragma once

#include "symrl/partition.hpp"
#include "symrl/tabular_mdp.hpp"

#include <vector>

namespace symrl {

// Candidate automorphism: a state bijection f and per-state action maps g,
// with g[s][a] the image of action a taken at state s. Entries for
// inadmissible actions are ignored.
struct SymmetryMap {
  std::vector<int> f;
  std::vector<std::vector<int>> g;

  static SymmetryMap identity(const TabularMDP& mdp);

  // (s, a) -> (f(s), g_s(a)).
  std::pair<int, int> apply(int s, int a) const { return {f[s], g[s][a]}; }
};

// True iff sym satisfies the homomorphism conditions on mdp:
// T(f(s), g_s(a), f(s')) == T(s, a, s') for every admissible (s, a) and
// every s', and the rewards agree wherever either transition has support.
// Throws std::invalid_argument when sym is structurally invalid (f not a
// bijection, g_s not injective, or an admissible pair mapped to an
// inadmissible one).
bool check_symmetry(const TabularMDP& mdp, const SymmetryMap& sym, double tol = TabularMDP::kDefaultTol);

// Partition of admissible pair ids into orbits of (s, a) -> (f(s), g_s(a)).
// Closure under repeated application covers symmetries of any finite order.
// Throws when check_symmetry fails.
Partition equivalence_classes(const TabularMDP& mdp, const SymmetryMap& sym,
                              double tol = TabularMDP::kDefaultTol);

}  // namespace symrl
