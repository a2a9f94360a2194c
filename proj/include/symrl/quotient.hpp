#pragma once

#include "symrl/partition.hpp"
#include "symrl/tabular_mdp.hpp"

#include <vector>

namespace symrl {

// Quotient MDP M/C. States are the blocks of the state partition obtained by
// projecting the pair classes onto states; actions are the classes
// themselves, admissible at every block one of their member states belongs
// to.
struct Quotient {
  TabularMDP mdp;
  Partition state_blocks;  // over original states
  Partition classes;       // over original pair ids, as supplied
};

// Builds the quotient. Every member of a class must induce the same
// block-aggregated transition probabilities and probability-weighted rewards
// within tol; a violation raises std::invalid_argument naming the class and
// the offending pair.
Quotient build_quotient(const TabularMDP& mdp, const Partition& classes,
                        double tol = TabularMDP::kDefaultTol);

// Lifts a quotient Q-table (indexed by quotient pair id) back to the
// original MDP's pair ids: Q(s, a) = Q'([s], C[(s, a)]).
std::vector<double> lift_q(const Quotient& quotient, const TabularMDP& original,
                           const std::vector<double>& quotient_q);

}  // namespace symrl
