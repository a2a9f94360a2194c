#include "symrl/gridworld.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace symrl {

namespace {

int l1_distance(const GridCoords& a, const GridCoords& b, int dims) {
  int d = 0;
  for (int k = 0; k < dims; ++k) d += std::abs(a[k] - b[k]);
  return d;
}

}  // namespace

double potential(Shaping kind, const GridCoords& state, const GridCoords& goal, int dims,
                 double gamma) {
  if (kind == Shaping::None) return 0.0;
  const double l1 = l1_distance(state, goal, dims);
  return kind == Shaping::Pot1 ? l1 : l1 * std::pow(gamma, l1);
}

double potential_shaping(Shaping kind, const GridCoords& s, const GridCoords& s_next,
                         const GridCoords& goal, int dims, double gamma) {
  return gamma * potential(kind, s_next, goal, dims, gamma) -
         potential(kind, s, goal, dims, gamma);
}

GridWorld::GridWorld(const GridWorldConfig& config) : config_(config) {
  if (config.size_n < 2) throw std::invalid_argument("GridWorld: size_n must be at least 2");
  if (config.dims_d < 1 || config.dims_d > 3)
    throw std::invalid_argument("GridWorld: dims_d must be 1, 2, or 3");
  if (config.slip_prob < 0 || config.slip_prob > 1)
    throw std::invalid_argument("GridWorld: slip_prob must lie in [0, 1]");
  if (config.max_steps < 1) throw std::invalid_argument("GridWorld: max_steps must be positive");
  cell_count_ = 1;
  for (int k = 0; k < config.dims_d; ++k) cell_count_ *= config.size_n;
  auto check_cell = [&](const GridCoords& c, const char* what) {
    for (int k = 0; k < config_.dims_d; ++k)
      if (c[k] < 1 || c[k] > config_.size_n)
        throw std::invalid_argument(std::string("GridWorld: ") + what + " outside the grid");
    for (int k = config_.dims_d; k < 3; ++k)
      if (c[k] != 1) throw std::invalid_argument(std::string("GridWorld: ") + what + " uses unused dimensions");
  };
  check_cell(config.goal, "goal");
  if (!config.uniform_start) {
    check_cell(config.start, "start");
    if (config.start == config.goal)
      throw std::invalid_argument("GridWorld: fixed start equals the goal");
  }
}

int GridWorld::cell_index(const GridCoords& c) const {
  int idx = 0;
  for (int k = config_.dims_d - 1; k >= 0; --k) {
    if (c[k] < 1 || c[k] > config_.size_n)
      throw std::invalid_argument("GridWorld: coordinates outside the grid");
    idx = idx * config_.size_n + (c[k] - 1);
  }
  return idx;
}

GridCoords GridWorld::coords_of(int index) const {
  if (index < 0 || index >= cell_count_)
    throw std::invalid_argument("GridWorld: cell index out of range");
  GridCoords c = {1, 1, 1};
  for (int k = 0; k < config_.dims_d; ++k) {
    c[k] = index % config_.size_n + 1;
    index /= config_.size_n;
  }
  return c;
}

void GridWorld::reset(Rng& rng) {
  if (config_.uniform_start) {
    // Uniform over non-goal cells.
    do {
      coords_ = coords_of(rng.uniform_int(cell_count_));
    } while (coords_ == config_.goal);
  } else {
    coords_ = config_.start;
  }
  done_ = false;
  steps_ = 0;
}

GridCoords GridWorld::clamp_move(const GridCoords& from, int action) const {
  const int axis = action / 2;
  const int delta = action % 2 == 0 ? -1 : 1;
  GridCoords to = from;
  to[axis] += delta;
  if (to[axis] < 1 || to[axis] > config_.size_n) return from;
  return to;
}

double GridWorld::shaping_term(const GridCoords& from, const GridCoords& to) const {
  if (config_.shaping == Shaping::None) return 0.0;
  return config_.shaping_sign *
         potential_shaping(config_.shaping, from, to, config_.goal, config_.dims_d, config_.gamma);
}

StepResult GridWorld::step(int action, Rng& rng) {
  if (done_) throw std::logic_error("GridWorld: step on a finished episode");
  if (action < 0 || action >= action_count())
    throw std::invalid_argument("GridWorld: action out of range");
  GridCoords next;
  if (rng.uniform() < 1.0 - config_.slip_prob) {
    next = clamp_move(coords_, action);
  } else {
    next = clamp_move(coords_, rng.uniform_int(action_count()));
  }
  StepResult result;
  result.terminated = next == config_.goal;
  result.base_reward = result.terminated ? 1.0 : 0.0;
  result.shaped_reward = result.base_reward + shaping_term(coords_, next);
  ++steps_;
  if (!result.terminated && steps_ >= config_.max_steps) result.truncated = true;
  coords_ = next;
  done_ = result.terminated || result.truncated;
  return result;
}

std::vector<double> GridWorld::observation() const {
  std::vector<double> obs(config_.dims_d);
  for (int k = 0; k < config_.dims_d; ++k) obs[k] = coords_[k];
  return obs;
}

void GridWorld::encode(const double* obs, int action, double* out) const {
  GridCoords c = {1, 1, 1};
  for (int k = 0; k < config_.dims_d; ++k) c[k] = static_cast<int>(std::lround(obs[k]));
  const int n = input_size();
  for (int j = 0; j < n; ++j) out[j] = 0.0;
  out[cell_index(c)] = 1.0;
  if (action < 0 || action >= action_count())
    throw std::invalid_argument("GridWorld: action out of range");
  out[cell_count_ + action] = 1.0;
}

SAKey GridWorld::discrete_key(const double* obs, int action) const {
  GridCoords c = {1, 1, 1};
  for (int k = 0; k < config_.dims_d; ++k) c[k] = static_cast<int>(std::lround(obs[k]));
  return SAKey{cell_index(c), action};
}

int GridWorld::optimal_steps(const GridCoords& from) const {
  return l1_distance(from, config_.goal, config_.dims_d);
}

GridWorld GridWorld::deterministic_copy() const {
  GridWorldConfig cfg = config_;
  cfg.slip_prob = 0.0;
  return GridWorld(cfg);
}

TabularMDP GridWorld::tabular() const {
  TabularMDP mdp(cell_count_, action_count());
  const int goal_idx = cell_index(config_.goal);
  mdp.set_terminal(goal_idx);
  for (int idx = 0; idx < cell_count_; ++idx) {
    if (idx == goal_idx) continue;
    const GridCoords from = coords_of(idx);
    for (int a = 0; a < action_count(); ++a) {
      auto add = [&](const GridCoords& to, double prob) {
        const double base = to == config_.goal ? 1.0 : 0.0;
        mdp.add_transition(idx, a, cell_index(to), prob, base + shaping_term(from, to));
      };
      add(clamp_move(from, a), 1.0 - config_.slip_prob);
      if (config_.slip_prob > 0) {
        const double each = config_.slip_prob / action_count();
        for (int slip = 0; slip < action_count(); ++slip) add(clamp_move(from, slip), each);
      }
    }
  }
  mdp.freeze();
  return mdp;
}

SymmetryMap GridWorld::axis_reflection(int axis) const {
  if (axis < 0 || axis >= config_.dims_d)
    throw std::invalid_argument("GridWorld: reflection axis out of range");
  SymmetryMap sym;
  sym.f.resize(cell_count_);
  for (int idx = 0; idx < cell_count_; ++idx) {
    GridCoords c = coords_of(idx);
    c[axis] = config_.size_n + 1 - c[axis];
    sym.f[idx] = cell_index(c);
  }
  std::vector<int> action_map(action_count());
  for (int a = 0; a < action_count(); ++a) action_map[a] = a;
  std::swap(action_map[2 * axis], action_map[2 * axis + 1]);
  sym.g.assign(cell_count_, action_map);
  return sym;
}

}  // namespace symrl
