#pragma once

#include "symrl/env.hpp"

#include <array>

namespace symrl {

struct CartPoleConfig {
  // Termination bounds (theta in radians) and discretization half-widths,
  // in state order (theta, x, omega, v). theta and x also terminate the
  // episode; omega and v only clamp the discretization.
  double theta_bound = 12.0 * 3.14159265358979323846 / 180.0;
  double x_bound = 2.4;
  double omega_bound = 3.5;
  double v_bound = 3.0;
  int levels = 9;  // odd, so a centered zero cell exists
  int max_steps = 1500;

  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double pole_half_length = 0.5;
  double force = 10.0;
  double tau = 0.02;  // Euler integration step

  // Start-state half-width: components drawn uniformly in +-reset_range.
  double reset_range = 0.05;

  bool shaping = true;   // add F(disc(s')) on non-terminal steps
};

// Division of a symmetric interval [-bound, bound] into `levels` uniform
// cells: index round(value / w) with w = 2 * bound / levels, clamped to
// +-(levels - 1) / 2.
int discretize_component(double value, double bound, int levels);

// F = 1 - (theta_d^2 + x_d^2 + omega_d^2 + v_d^2) / (levels - 1)^2.
double cartpole_shaping(const std::array<int, 4>& indices, int levels);

// Cart-pole balancing with explicit-Euler dynamics. State order is
// (theta, x, omega, v); actions are {0: Left, 1: Right}. Reward is +1 per
// step, plus the discretized shaping bonus on non-terminal steps when
// enabled.
class CartPole final : public Env {
 public:
  explicit CartPole(const CartPoleConfig& config);

  int action_count() const override { return 2; }
  int observation_size() const override { return 4; }
  int input_size() const override { return 4; }
  QLayout q_layout() const override { return QLayout::PerState; }

  void reset(Rng& rng) override;
  StepResult step(int action, Rng& rng) override;
  std::vector<double> observation() const override;
  bool done() const override { return done_; }
  int steps() const override { return steps_; }

  void encode(const double* obs, int action, double* out) const override;
  SAKey discrete_key(const double* obs, int action) const override;

  const CartPoleConfig& config() const { return config_; }
  const std::array<double, 4>& state() const { return state_; }
  void set_state(const std::array<double, 4>& state);

  std::array<int, 4> discretize(const std::array<double, 4>& state) const;
  std::array<int, 4> unpack_state_index(int packed) const;

  // One dynamics step from an explicit state, without episode bookkeeping.
  std::array<double, 4> dynamics(const std::array<double, 4>& state, int action) const;

 private:
  CartPoleConfig config_;
  std::array<double, 4> state_ = {0, 0, 0, 0};
  bool done_ = true;
  int steps_ = 0;
};

}  // namespace symrl
