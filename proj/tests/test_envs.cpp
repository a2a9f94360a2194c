#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symrl/cartpole.hpp"
#include "symrl/gridworld.hpp"
#include "symrl/rng.hpp"
#include "symrl/value_iteration.hpp"

#include <array>
#include <cmath>
#include <set>
#include <vector>

using namespace symrl;

namespace {

GridWorldConfig grid_config(int size, int dims, double slip, GridCoords goal,
                            GridCoords start = {1, 1, 1}) {
  GridWorldConfig config;
  config.size_n = size;
  config.dims_d = dims;
  config.slip_prob = slip;
  config.goal = goal;
  config.uniform_start = false;
  config.start = start;
  return config;
}

}  // namespace

TEST_CASE("gridworld deterministic steps") {
  Rng rng(1);
  SUBCASE("interior move") {
    GridWorld grid(grid_config(9, 2, 0.0, {6, 1, 1}, {2, 1, 1}));
    grid.reset(rng);
    const StepResult result = grid.step(1, rng);  // E
    CHECK(grid.coords() == GridCoords{3, 1, 1});
    CHECK(result.base_reward == 0.0);
    CHECK_FALSE(result.terminated);
  }
  SUBCASE("wall clamp") {
    GridWorld grid(grid_config(9, 2, 0.0, {6, 1, 1}, {1, 1, 1}));
    grid.reset(rng);
    grid.step(0, rng);  // W into the wall
    CHECK(grid.coords() == GridCoords{1, 1, 1});
  }
  SUBCASE("goal entry terminates with reward 1") {
    GridWorld grid(grid_config(9, 2, 0.0, {6, 1, 1}, {5, 1, 1}));
    grid.reset(rng);
    const StepResult result = grid.step(1, rng);
    CHECK(result.terminated);
    CHECK(result.base_reward == 1.0);
    CHECK(grid.done());
  }
  SUBCASE("max_steps truncates without terminating") {
    GridWorldConfig config = grid_config(9, 2, 0.0, {6, 6, 1}, {1, 1, 1});
    config.max_steps = 3;
    GridWorld grid(config);
    grid.reset(rng);
    grid.step(0, rng);
    grid.step(0, rng);
    const StepResult result = grid.step(0, rng);
    CHECK(result.truncated);
    CHECK_FALSE(result.terminated);
    CHECK(grid.done());
  }
  SUBCASE("stepping a finished episode is rejected") {
    GridWorld grid(grid_config(9, 2, 0.0, {6, 1, 1}, {5, 1, 1}));
    grid.reset(rng);
    grid.step(1, rng);
    CHECK_THROWS_AS(grid.step(1, rng), std::logic_error);
  }
}

TEST_CASE("gridworld slip distribution") {
  // From an interior cell the intended neighbor absorbs the slip mass that
  // happens to pick it: 0.9 + 0.1/(2d).
  Rng rng(99);
  GridWorld grid(grid_config(5, 2, 0.1, {5, 5, 1}, {3, 3, 1}));
  int intended = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    grid.reset(rng);
    grid.step(1, rng);  // E from (3,3)
    if (grid.coords() == GridCoords{4, 3, 1}) ++intended;
  }
  const double freq = static_cast<double>(intended) / trials;
  CHECK(freq == doctest::Approx(0.9 + 0.1 / 4).epsilon(0.011));
}

TEST_CASE("gridworld tabular model matches the step law") {
  const GridWorld grid(grid_config(5, 2, 0.1, {3, 3, 1}));
  const TabularMDP mdp = grid.tabular();
  const int s = grid.cell_index({2, 2, 1});
  const int east = grid.cell_index({3, 2, 1});
  const int west = grid.cell_index({1, 2, 1});
  const int north = grid.cell_index({2, 3, 1});
  const int south = grid.cell_index({2, 1, 1});
  CHECK(mdp.transition(s, 1, east) == doctest::Approx(0.9 + 0.1 / 4));
  CHECK(mdp.transition(s, 1, west) == doctest::Approx(0.1 / 4));
  CHECK(mdp.transition(s, 1, north) == doctest::Approx(0.1 / 4));
  CHECK(mdp.transition(s, 1, south) == doctest::Approx(0.1 / 4));
  double row_sum = 0;
  for (int next = 0; next < mdp.state_count(); ++next) row_sum += mdp.transition(s, 1, next);
  CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("potentials") {
  const GridCoords goal = {6, 1, 1};
  CHECK(potential(Shaping::Pot1, {2, 1, 1}, goal, 2, 0.9) == 4.0);
  CHECK(potential(Shaping::Pot2, {4, 1, 1}, goal, 2, 0.9) ==
        doctest::Approx(2 * 0.81).epsilon(1e-12));
  CHECK(potential(Shaping::Pot1, goal, goal, 2, 0.9) == 0.0);
  CHECK(potential(Shaping::None, {2, 1, 1}, goal, 2, 0.9) == 0.0);

  CHECK(potential_shaping(Shaping::Pot1, {2, 1, 1}, {3, 1, 1}, goal, 2, 0.9) ==
        doctest::Approx(0.9 * 3 - 4).epsilon(1e-12));
  CHECK(potential_shaping(Shaping::Pot1, {2, 1, 1}, {2, 1, 1}, goal, 2, 1.0) == 0.0);
}

TEST_CASE("potential shaping telescopes along trajectories") {
  Rng rng(17);
  const GridCoords goal = {3, 3, 2};
  const double gamma = 0.9;
  for (const Shaping kind : {Shaping::Pot1, Shaping::Pot2}) {
    std::vector<GridCoords> path;
    for (int t = 0; t < 12; ++t)
      path.push_back({1 + rng.uniform_int(5), 1 + rng.uniform_int(5), 1 + rng.uniform_int(3)});
    double sum = 0, discount = 1;
    for (std::size_t t = 0; t + 1 < path.size(); ++t, discount *= gamma)
      sum += discount * potential_shaping(kind, path[t], path[t + 1], goal, 3, gamma);
    const double expected = discount * potential(kind, path.back(), goal, 3, gamma) -
                            potential(kind, path.front(), goal, 3, gamma);
    CHECK(sum == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("gridworld encoding") {
  const GridWorld grid(grid_config(3, 2, 0.0, {2, 2, 1}));
  REQUIRE(grid.input_size() == 13);
  std::vector<double> buffer(13);
  const auto encode = [&](GridCoords coords, int action) {
    std::vector<double> obs = {static_cast<double>(coords[0]), static_cast<double>(coords[1])};
    grid.encode(obs.data(), action, buffer.data());
    std::vector<int> ones;
    for (int k = 0; k < 13; ++k)
      if (buffer[k] != 0.0) ones.push_back(k);
    return ones;
  };
  CHECK(encode({1, 1, 1}, 0) == std::vector<int>{0, 9});
  CHECK(encode({3, 3, 1}, 3) == std::vector<int>{8, 12});

  std::set<std::vector<int>> seen;
  for (int x = 1; x <= 3; ++x)
    for (int y = 1; y <= 3; ++y)
      for (int a = 0; a < 4; ++a) seen.insert(encode({x, y, 1}, a));
  CHECK(seen.size() == 36);  // all encodings distinct
}

TEST_CASE("gridworld oracle helpers") {
  const GridWorld grid(grid_config(9, 2, 0.1, {6, 4, 1}));
  CHECK(grid.optimal_steps({2, 1, 1}) == 7);
  CHECK(grid.optimal_steps({6, 4, 1}) == 0);
  CHECK(grid.deterministic_copy().config().slip_prob == 0.0);
  for (int index = 0; index < grid.cell_count(); ++index)
    CHECK(grid.cell_index(grid.coords_of(index)) == index);
}

TEST_CASE("gridworld shaped rewards fold into step results") {
  Rng rng(4);
  GridWorldConfig config = grid_config(5, 2, 0.0, {4, 3, 1}, {2, 3, 1});
  config.shaping = Shaping::Pot1;
  config.shaping_sign = -1;
  GridWorld grid(config);
  grid.reset(rng);
  const StepResult result = grid.step(1, rng);  // E, distance 2 -> 1
  CHECK(result.base_reward == 0.0);
  // -(gamma * 1 - 2) with gamma 0.9.
  CHECK(result.shaped_reward == doctest::Approx(-(0.9 * 1 - 2)).epsilon(1e-12));
}

TEST_CASE("cartpole dynamics") {
  CartPole pole{CartPoleConfig{}};
  SUBCASE("one Euler step from rest, Right") {
    const auto next = pole.dynamics({0, 0, 0, 0}, 1);
    CHECK(next[0] == 0.0);  // theta uses the old omega
    CHECK(next[1] == 0.0);  // x uses the old v
    CHECK(next[2] == doctest::Approx(-0.2926829268292683).epsilon(1e-12));
    CHECK(next[3] == doctest::Approx(0.1951219512195122).epsilon(1e-12));
  }
  SUBCASE("Left mirrors Right exactly") {
    const auto right = pole.dynamics({0, 0, 0, 0}, 1);
    const auto left = pole.dynamics({0, 0, 0, 0}, 0);
    for (int k = 0; k < 4; ++k) CHECK(left[k] == -right[k]);
  }
  SUBCASE("negation equivariance on random states") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
      std::array<double, 4> state{};
      for (int k = 0; k < 4; ++k) state[k] = rng.uniform_range(-0.2, 0.2);
      const int action = rng.uniform_int(2);
      const auto forward = pole.dynamics(state, action);
      std::array<double, 4> negated;
      for (int k = 0; k < 4; ++k) negated[k] = -state[k];
      const auto mirrored = pole.dynamics(negated, 1 - action);
      for (int k = 0; k < 4; ++k) CHECK(mirrored[k] == -forward[k]);
    }
  }
}

TEST_CASE("cartpole episodes") {
  Rng rng(31);
  CartPole pole{CartPoleConfig{}};
  SUBCASE("reward is +1 plus the shaping bonus") {
    pole.reset(rng);
    pole.set_state({0, 0, 0, 0});
    const StepResult result = pole.step(1, rng);
    CHECK(result.base_reward == 1.0);
    // All four components stay in the center cell after one step.
    CHECK(result.shaped_reward == doctest::Approx(2.0));
  }
  SUBCASE("x beyond the bound terminates") {
    pole.reset(rng);
    pole.set_state({0, 2.39, 0, 3.0});
    const StepResult result = pole.step(1, rng);
    CHECK(result.terminated);
  }
  SUBCASE("theta beyond the bound terminates") {
    pole.reset(rng);
    pole.set_state({12.0 * 3.14159265 / 180.0 - 1e-4, 0, 0.8, 0});
    const StepResult result = pole.step(1, rng);
    CHECK(result.terminated);
  }
  SUBCASE("terminal steps skip the shaping bonus") {
    pole.reset(rng);
    pole.set_state({0, 2.39, 0, 3.0});
    const StepResult result = pole.step(1, rng);
    CHECK(result.shaped_reward == result.base_reward);
  }
  SUBCASE("truncation at max_steps") {
    CartPoleConfig config;
    config.max_steps = 2;
    CartPole short_pole(config);
    short_pole.reset(rng);
    short_pole.set_state({0, 0, 0, 0});
    short_pole.step(0, rng);
    const StepResult result = short_pole.step(1, rng);
    CHECK(result.truncated);
    CHECK_FALSE(result.terminated);
  }
  SUBCASE("non-finite state is rejected") {
    pole.reset(rng);
    CHECK_THROWS_AS(pole.set_state({std::nan(""), 0, 0, 0}), std::invalid_argument);
  }
}

TEST_CASE("discretization") {
  CHECK(discretize_component(0.0, 2.4, 9) == 0);
  CHECK(discretize_component(0.3, 2.4, 9) == 1);
  CHECK(discretize_component(-2.4, 2.4, 9) == -4);
  CHECK(discretize_component(100.0, 2.4, 9) == 4);  // clamped

  Rng rng(41);
  const CartPole pole{CartPoleConfig{}};
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 4> state;
    for (int k = 0; k < 4; ++k) state[k] = rng.uniform_range(-4, 4);
    const auto indices = pole.discretize(state);
    std::array<double, 4> negated;
    for (int k = 0; k < 4; ++k) negated[k] = -state[k];
    const auto mirrored = pole.discretize(negated);
    for (int k = 0; k < 4; ++k) CHECK(mirrored[k] == -indices[k]);
    CHECK(cartpole_shaping(mirrored, 9) == cartpole_shaping(indices, 9));
  }
}

TEST_CASE("cartpole shaping formula") {
  CHECK(cartpole_shaping({0, 0, 0, 0}, 9) == 1.0);
  CHECK(cartpole_shaping({4, 4, 4, 4}, 9) == 0.0);
  CHECK(cartpole_shaping({1, 0, 2, 0}, 9) == doctest::Approx(1.0 - 5.0 / 64.0));
}

TEST_CASE("shaped grid values keep the greedy sets") {
  for (const int size : {5}) {
    for (const Shaping kind : {Shaping::Pot1, Shaping::Pot2}) {
      for (const int sign : {-1, 1}) {
        GridWorldConfig plain = grid_config(size, 2, 0.1, {3, 3, 1});
        GridWorldConfig shaped = plain;
        shaped.shaping = kind;
        shaped.shaping_sign = sign;
        const TabularMDP base = GridWorld(plain).tabular();
        const TabularMDP with_shaping = GridWorld(shaped).tabular();
        const auto greedy_base = greedy_action_sets(base, value_iteration(base, 0.9, 1e-10));
        const auto greedy_shaped =
            greedy_action_sets(with_shaping, value_iteration(with_shaping, 0.9, 1e-10));
        CHECK(greedy_base == greedy_shaped);
      }
    }
  }
}
