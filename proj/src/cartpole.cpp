#include "symrl/cartpole.hpp"

#include <cmath>
#include <stdexcept>

namespace symrl {

int discretize_component(double value, double bound, int levels) {
  const double width = 2.0 * bound / levels;
  const int limit = (levels - 1) / 2;
  const long idx = std::lround(value / width);
  if (idx < -limit) return -limit;
  if (idx > limit) return limit;
  return static_cast<int>(idx);
}

double cartpole_shaping(const std::array<int, 4>& indices, int levels) {
  double sum_sq = 0;
  for (int k : indices) sum_sq += static_cast<double>(k) * k;
  const double span = levels - 1;
  return 1.0 - sum_sq / (span * span);
}

CartPole::CartPole(const CartPoleConfig& config) : config_(config) {
  if (config.levels < 3 || config.levels % 2 == 0)
    throw std::invalid_argument("CartPole: levels must be odd and at least 3");
  if (config.theta_bound <= 0 || config.x_bound <= 0 || config.omega_bound <= 0 ||
      config.v_bound <= 0)
    throw std::invalid_argument("CartPole: bounds must be positive");
  if (config.gravity <= 0 || config.cart_mass <= 0 || config.pole_mass <= 0 ||
      config.pole_half_length <= 0 || config.force <= 0 || config.tau <= 0)
    throw std::invalid_argument("CartPole: physics constants must be positive");
  if (config.max_steps < 1) throw std::invalid_argument("CartPole: max_steps must be positive");
}

void CartPole::reset(Rng& rng) {
  for (double& c : state_) c = rng.uniform_range(-config_.reset_range, config_.reset_range);
  done_ = false;
  steps_ = 0;
}

void CartPole::set_state(const std::array<double, 4>& state) {
  for (double c : state)
    if (!std::isfinite(c)) throw std::invalid_argument("CartPole: non-finite state");
  state_ = state;
  done_ = false;
  steps_ = 0;
}

std::array<double, 4> CartPole::dynamics(const std::array<double, 4>& state, int action) const {
  if (action != 0 && action != 1) throw std::invalid_argument("CartPole: action out of range");
  const auto [theta, x, omega, v] = state;
  if (!std::isfinite(theta) || !std::isfinite(x) || !std::isfinite(omega) || !std::isfinite(v))
    throw std::invalid_argument("CartPole: non-finite state");
  const double force = action == 1 ? config_.force : -config_.force;
  const double total_mass = config_.cart_mass + config_.pole_mass;
  const double pole_mass_length = config_.pole_mass * config_.pole_half_length;
  const double cos_theta = std::cos(theta);
  const double sin_theta = std::sin(theta);
  const double temp = (force + pole_mass_length * omega * omega * sin_theta) / total_mass;
  const double theta_acc =
      (config_.gravity * sin_theta - cos_theta * temp) /
      (config_.pole_half_length * (4.0 / 3.0 - config_.pole_mass * cos_theta * cos_theta / total_mass));
  const double x_acc = temp - pole_mass_length * theta_acc * cos_theta / total_mass;
  // Semi-explicit Euler in the CartPole-v0 order: positions advance with the
  // old velocities.
  return {theta + config_.tau * omega, x + config_.tau * v, omega + config_.tau * theta_acc,
          v + config_.tau * x_acc};
}

StepResult CartPole::step(int action, Rng&) {
  if (done_) throw std::logic_error("CartPole: step on a finished episode");
  state_ = dynamics(state_, action);
  ++steps_;
  StepResult result;
  result.terminated =
      std::abs(state_[0]) > config_.theta_bound || std::abs(state_[1]) > config_.x_bound;
  result.truncated = !result.terminated && steps_ >= config_.max_steps;
  result.base_reward = 1.0;
  result.shaped_reward = result.base_reward;
  if (!result.terminated && config_.shaping)
    result.shaped_reward += cartpole_shaping(discretize(state_), config_.levels);
  done_ = result.terminated || result.truncated;
  return result;
}

std::vector<double> CartPole::observation() const {
  return {state_[0], state_[1], state_[2], state_[3]};
}

void CartPole::encode(const double* obs, int action, double* out) const {
  (void)action;
  for (int k = 0; k < 4; ++k) out[k] = obs[k];
}

std::array<int, 4> CartPole::discretize(const std::array<double, 4>& state) const {
  return {discretize_component(state[0], config_.theta_bound, config_.levels),
          discretize_component(state[1], config_.x_bound, config_.levels),
          discretize_component(state[2], config_.omega_bound, config_.levels),
          discretize_component(state[3], config_.v_bound, config_.levels)};
}

SAKey CartPole::discrete_key(const double* obs, int action) const {
  const auto idx = discretize({obs[0], obs[1], obs[2], obs[3]});
  const int half = (config_.levels - 1) / 2;
  int packed = 0;
  for (int k = 0; k < 4; ++k) packed = packed * config_.levels + (idx[k] + half);
  return SAKey{packed, action};
}

std::array<int, 4> CartPole::unpack_state_index(int packed) const {
  const int half = (config_.levels - 1) / 2;
  std::array<int, 4> idx;
  for (int k = 3; k >= 0; --k) {
    idx[k] = packed % config_.levels - half;
    packed /= config_.levels;
  }
  return idx;
}

}  // namespace symrl
