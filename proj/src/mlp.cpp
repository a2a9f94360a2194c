#include "symrl/mlp.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace symrl {

void ParamSet::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

void ParamSet::scale(double factor) {
  for (auto& w : weights) w *= factor;
  for (auto& b : biases) b *= factor;
}

bool ParamSet::all_finite() const {
  for (const auto& w : weights)
    if (!w.allFinite()) return false;
  for (const auto& b : biases)
    if (!b.allFinite()) return false;
  return true;
}

bool ParamSet::same_shape(const ParamSet& other) const {
  if (weights.size() != other.weights.size() || biases.size() != other.biases.size()) return false;
  for (std::size_t l = 0; l < weights.size(); ++l)
    if (weights[l].rows() != other.weights[l].rows() ||
        weights[l].cols() != other.weights[l].cols() ||
        biases[l].size() != other.biases[l].size())
      return false;
  return true;
}

MLP::MLP(const std::vector<int>& layer_sizes, std::uint64_t seed) : layer_sizes_(layer_sizes) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("MLP: need at least input and output layers");
  for (int size : layer_sizes)
    if (size < 1) throw std::invalid_argument("MLP: zero-width layer");
  Rng rng(seed);
  const auto layers = layer_sizes.size() - 1;
  params_.weights.reserve(layers);
  params_.biases.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const int fan_in = layer_sizes[l];
    const int fan_out = layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_out, fan_in);
    double* data = w.data();
    for (Eigen::Index k = 0; k < w.size(); ++k) data[k] = rng.uniform_range(-limit, limit);
    params_.weights.push_back(std::move(w));
    params_.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
}

int MLP::parameter_count() const {
  int count = 0;
  for (const auto& w : params_.weights) count += static_cast<int>(w.size());
  for (const auto& b : params_.biases) count += static_cast<int>(b.size());
  return count;
}

Eigen::MatrixXd MLP::forward(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_size()) throw std::invalid_argument("MLP: input dimension mismatch");
  Eigen::MatrixXd h = inputs;
  const auto layers = params_.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    h = (params_.weights[l] * h).colwise() + params_.biases[l];
    if (l + 1 < layers) h = h.cwiseMax(0.0);
  }
  return h;
}

Eigen::VectorXd MLP::forward_one(const Eigen::VectorXd& input) const {
  return forward(Eigen::MatrixXd(input)).col(0);
}

double MLP::selected_mse(const Eigen::MatrixXd& inputs, const std::vector<int>& actions,
                         const Eigen::VectorXd& targets, GradientBuffer& grads) const {
  const auto batch = inputs.cols();
  if (static_cast<Eigen::Index>(actions.size()) != batch || targets.size() != batch)
    throw std::invalid_argument("MLP: batch size mismatch");
  if (inputs.rows() != input_size()) throw std::invalid_argument("MLP: input dimension mismatch");
  if (batch == 0) throw std::invalid_argument("MLP: empty batch");
  for (int a : actions)
    if (a < 0 || a >= output_size()) throw std::invalid_argument("MLP: action index out of range");

  const auto layers = params_.weights.size();
  // Forward pass, keeping post-activation values per layer.
  std::vector<Eigen::MatrixXd> activations(layers + 1);
  activations[0] = inputs;
  for (std::size_t l = 0; l < layers; ++l) {
    activations[l + 1] = (params_.weights[l] * activations[l]).colwise() + params_.biases[l];
    if (l + 1 < layers) activations[l + 1] = activations[l + 1].cwiseMax(0.0);
  }

  // Loss and output-layer gradient; only the selected outputs participate.
  const Eigen::MatrixXd& out = activations[layers];
  double loss = 0.0;
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(out.rows(), batch);
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const double diff = out(actions[b], b) - targets[b];
    loss += diff * diff * inv_batch;
    delta(actions[b], b) = 2.0 * diff * inv_batch;
  }

  if (grads.weights.empty()) grads = zero_gradients();
  for (std::size_t l = layers; l-- > 0;) {
    grads.weights[l].noalias() = delta * activations[l].transpose();
    grads.biases[l].noalias() = delta.rowwise().sum();
    if (l > 0) {
      // Rectifier mask: a hidden unit passes gradient iff its output is
      // positive.
      delta = ((params_.weights[l].transpose() * delta).array() *
               (activations[l].array() > 0.0).cast<double>())
                  .matrix();
    }
  }
  return loss;
}

double MLP::loss_td(const Eigen::MatrixXd& inputs, const std::vector<int>& actions,
                    const Eigen::VectorXd& targets, GradientBuffer& grads) const {
  return selected_mse(inputs, actions, targets, grads);
}

double MLP::loss_sym(const Eigen::MatrixXd& partner_inputs, const std::vector<int>& partner_actions,
                     const Eigen::VectorXd& fixed_targets, GradientBuffer& grads) const {
  return selected_mse(partner_inputs, partner_actions, fixed_targets, grads);
}

void MLP::apply_update(const GradientBuffer& grads, double learning_rate, double scale) {
  if (!grads.same_shape(params_)) throw std::invalid_argument("MLP: gradient shape mismatch");
  if (!grads.all_finite()) throw std::runtime_error("MLP: non-finite gradients");
  const double step = learning_rate * scale;
  for (std::size_t l = 0; l < params_.weights.size(); ++l) {
    params_.weights[l] -= step * grads.weights[l];
    params_.biases[l] -= step * grads.biases[l];
  }
}

void MLP::load_params(const ParamSet& params) {
  if (!params.same_shape(params_)) throw std::invalid_argument("MLP: parameter shape mismatch");
  params_ = params;
}

GradientBuffer MLP::zero_gradients() const {
  GradientBuffer grads;
  grads.weights.reserve(params_.weights.size());
  grads.biases.reserve(params_.biases.size());
  for (const auto& w : params_.weights) grads.weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  for (const auto& b : params_.biases) grads.biases.push_back(Eigen::VectorXd::Zero(b.size()));
  return grads;
}

namespace {

constexpr std::uint32_t kMagic = 0x4d4c5031;  // "MLP1"

template <typename T>
void append_bytes(std::vector<std::uint8_t>& out, const T& value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T read_bytes(const std::vector<std::uint8_t>& in, std::size_t& offset) {
  if (offset + sizeof(T) > in.size()) throw std::invalid_argument("MLP: truncated checkpoint");
  T value;
  std::memcpy(&value, in.data() + offset, sizeof(T));
  offset += sizeof(T);
  return value;
}

}  // namespace

std::vector<std::uint8_t> MLP::save_bytes() const {
  std::vector<std::uint8_t> out;
  append_bytes(out, kMagic);
  append_bytes(out, static_cast<std::uint32_t>(layer_sizes_.size()));
  for (int size : layer_sizes_) append_bytes(out, static_cast<std::uint32_t>(size));
  for (std::size_t l = 0; l < params_.weights.size(); ++l) {
    const auto& w = params_.weights[l];
    for (Eigen::Index k = 0; k < w.size(); ++k) append_bytes(out, w.data()[k]);
    const auto& b = params_.biases[l];
    for (Eigen::Index k = 0; k < b.size(); ++k) append_bytes(out, b[k]);
  }
  return out;
}

MLP MLP::load_bytes(const std::vector<std::uint8_t>& bytes) {
  std::size_t offset = 0;
  if (read_bytes<std::uint32_t>(bytes, offset) != kMagic)
    throw std::invalid_argument("MLP: bad checkpoint magic");
  const auto layer_count = read_bytes<std::uint32_t>(bytes, offset);
  if (layer_count < 2 || layer_count > 64) throw std::invalid_argument("MLP: bad layer count");
  std::vector<int> sizes(layer_count);
  for (auto& size : sizes) size = static_cast<int>(read_bytes<std::uint32_t>(bytes, offset));
  MLP mlp(sizes, 0);
  for (std::size_t l = 0; l < mlp.params_.weights.size(); ++l) {
    auto& w = mlp.params_.weights[l];
    for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = read_bytes<double>(bytes, offset);
    auto& b = mlp.params_.biases[l];
    for (Eigen::Index k = 0; k < b.size(); ++k) b[k] = read_bytes<double>(bytes, offset);
  }
  if (offset != bytes.size()) throw std::invalid_argument("MLP: trailing checkpoint bytes");
  return mlp;
}

}  // namespace symrl
