#pragma once

#include "symrl/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace symrl {

// Parameters or parameter-shaped accumulators for an MLP: one weight matrix
// and one bias vector per non-input layer.
struct ParamSet {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  void set_zero();
  void scale(double factor);
  bool all_finite() const;
  bool same_shape(const ParamSet& other) const;
};

using GradientBuffer = ParamSet;

// Fully connected feedforward network with rectified-linear hidden layers
// and a linear output layer, in 64-bit precision. Inputs and outputs are
// column-per-sample matrices so whole batches go through one GEMM per
// layer.
class MLP {
 public:
  // Weights drawn uniformly in +-sqrt(6 / (fan_in + fan_out)), biases zero;
  // deterministic for a given seed.
  MLP(const std::vector<int>& layer_sizes, std::uint64_t seed);

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }
  int parameter_count() const;

  Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs) const;
  Eigen::VectorXd forward_one(const Eigen::VectorXd& input) const;

  // Mean squared error between the `actions`-selected outputs and fixed
  // `targets`, with the exact gradient of that loss accumulated into
  // `grads` (overwritten). Targets are constants: no gradient flows
  // through them. This is the one-step TD loss when targets come from the
  // bootstrapped backup.
  double loss_td(const Eigen::MatrixXd& inputs, const std::vector<int>& actions,
                 const Eigen::VectorXd& targets, GradientBuffer& grads) const;

  // The symmetric loss: identical mathematics, but targets are the
  // pre-update Q-values of the observed pair and the inputs describe the
  // symmetric partners, so the gradient flows only through the partner
  // outputs.
  double loss_sym(const Eigen::MatrixXd& partner_inputs, const std::vector<int>& partner_actions,
                  const Eigen::VectorXd& fixed_targets, GradientBuffer& grads) const;

  // parameters <- parameters - learning_rate * scale * grads.
  // Throws on non-finite gradients.
  void apply_update(const GradientBuffer& grads, double learning_rate, double scale = 1.0);

  ParamSet clone_params() const { return params_; }
  void load_params(const ParamSet& params);
  GradientBuffer zero_gradients() const;

  // Flat binary checkpoint: magic, layer count, layer sizes, then each
  // layer's weight matrix (column-major) and bias vector.
  std::vector<std::uint8_t> save_bytes() const;
  static MLP load_bytes(const std::vector<std::uint8_t>& bytes);

 private:
  double selected_mse(const Eigen::MatrixXd& inputs, const std::vector<int>& actions,
                      const Eigen::VectorXd& targets, GradientBuffer& grads) const;

  std::vector<int> layer_sizes_;
  ParamSet params_;
};

}  // namespace symrl
