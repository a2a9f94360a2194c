#pragma once

#include "symrl/env.hpp"
#include "symrl/symmetry_map.hpp"
#include "symrl/tabular_mdp.hpp"

#include <array>
#include <vector>

namespace symrl {

enum class Shaping { None, Pot1, Pot2 };

// Cell coordinates, 1-based per dimension; unused dimensions stay 1.
using GridCoords = std::array<int, 3>;

struct GridWorldConfig {
  int size_n = 9;
  int dims_d = 2;
  double slip_prob = 0.1;
  GridCoords goal = {1, 1, 1};
  double gamma = 0.9;
  int max_steps = 480;
  Shaping shaping = Shaping::None;
  // Applied as shaping_sign * (gamma * Theta(s') - Theta(s)). The literal
  // potentials grow with distance, so -1 rewards approaching the goal.
  int shaping_sign = -1;
  bool uniform_start = true;     // otherwise episodes begin at `start`
  GridCoords start = {1, 1, 1};
};

// Theta_1 = L1 distance to goal; Theta_2 = Theta_1 * gamma^Theta_1.
// Shaping::None yields 0.
double potential(Shaping kind, const GridCoords& state, const GridCoords& goal, int dims,
                 double gamma);

// gamma * Theta(s_next) - Theta(s), sign not applied.
double potential_shaping(Shaping kind, const GridCoords& s, const GridCoords& s_next,
                         const GridCoords& goal, int dims, double gamma);

// Shortest-path grid with slip: the intended neighbor is reached with
// probability 1 - slip_prob, otherwise a uniformly chosen axis neighbor;
// moves off the grid stay in place. Action ids pair up per axis:
// 2k = negative direction, 2k+1 = positive (2-D: 0=W, 1=E, 2=S, 3=N).
class GridWorld final : public Env {
 public:
  explicit GridWorld(const GridWorldConfig& config);

  int action_count() const override { return 2 * config_.dims_d; }
  int observation_size() const override { return config_.dims_d; }
  int input_size() const override { return cell_count_ + action_count(); }
  QLayout q_layout() const override { return QLayout::PerPair; }

  void reset(Rng& rng) override;
  StepResult step(int action, Rng& rng) override;
  std::vector<double> observation() const override;
  bool done() const override { return done_; }
  int steps() const override { return steps_; }

  void encode(const double* obs, int action, double* out) const override;
  SAKey discrete_key(const double* obs, int action) const override;

  const GridWorldConfig& config() const { return config_; }
  const GridCoords& coords() const { return coords_; }
  int cell_count() const { return cell_count_; }
  int cell_index(const GridCoords& c) const;
  GridCoords coords_of(int index) const;

  // Exact slip-free steps to goal from any cell (the L1 distance).
  int optimal_steps(const GridCoords& from) const;

  // A copy with slip_prob = 0 for deterministic greedy evaluation.
  GridWorld deterministic_copy() const;

  // Exact tabular model over cell indices; shaping folded into R when the
  // config requests it. The goal cell is terminal and absorbing.
  TabularMDP tabular() const;

  // Mirror about the grid center along `axis`, pairing the axis's two
  // actions; a genuine symmetry of tabular() when the goal sits on the
  // mirror plane (verify with check_symmetry).
  SymmetryMap axis_reflection(int axis) const;

 private:
  GridCoords clamp_move(const GridCoords& from, int action) const;
  double shaping_term(const GridCoords& from, const GridCoords& to) const;

  GridWorldConfig config_;
  int cell_count_ = 0;
  GridCoords coords_ = {1, 1, 1};
  bool done_ = true;
  int steps_ = 0;
};

}  // namespace symrl
