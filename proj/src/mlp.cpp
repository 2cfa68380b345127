#include "swingup/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace swingup {

namespace {

Vec apply_activation(const Vec& z, Activation act, double bound) {
  switch (act) {
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kTanh:
      return z.array().tanh();
    case Activation::kLinear:
      return z;
    case Activation::kScaledTanh:
      return bound * z.array().tanh();
  }
  throw std::logic_error("unknown activation");
}

}  // namespace

void MlpGradients::resize_like(const Mlp& net) {
  weights.resize(net.layer_count());
  biases.resize(net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    weights[l].resize(net.weight(l).rows(), net.weight(l).cols());
    biases[l].resize(net.bias(l).size());
  }
  input.resize(net.input_dim());
}

void MlpGradients::set_zero_like(const Mlp& net) {
  resize_like(net);
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
  input.setZero();
}

void MlpGradients::axpy(double alpha, const MlpGradients& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += alpha * other.weights[l];
    biases[l] += alpha * other.biases[l];
  }
  input += alpha * other.input;
}

void MlpGradients::scale(double alpha) {
  for (auto& w : weights) w *= alpha;
  for (auto& b : biases) b *= alpha;
  input *= alpha;
}

bool MlpGradients::finite() const {
  for (const auto& w : weights) {
    if (!w.allFinite()) return false;
  }
  for (const auto& b : biases) {
    if (!b.allFinite()) return false;
  }
  return input.allFinite();
}

Mlp::Mlp(const std::vector<int>& layer_dims, const MlpInit& init, Rng& rng)
    : layer_dims_(layer_dims), init_(init) {
  if (layer_dims_.size() < 2) {
    throw std::invalid_argument("Mlp: need at least input and output dims");
  }
  for (int d : layer_dims_) {
    if (d <= 0) throw std::invalid_argument("Mlp: layer dims must be positive");
  }
  const std::size_t layers = layer_dims_.size() - 1;
  weights_.reserve(layers);
  biases_.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const int fan_in = layer_dims_[l];
    const int fan_out = layer_dims_[l + 1];
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    if (l + 1 == layers && init_.final_layer_limit > 0.0) {
      limit = init_.final_layer_limit;
    }
    Mat w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = rng.uniform(-limit, limit);
      }
    }
    weights_.push_back(std::move(w));
    biases_.push_back(Vec::Zero(fan_out));
  }
}

Mlp::Mlp(std::vector<int> layer_dims, const MlpInit& init,
         std::vector<Mat> weights, std::vector<Vec> biases)
    : layer_dims_(std::move(layer_dims)),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      init_(init) {
  if (layer_dims_.size() < 2 || weights_.size() != layer_dims_.size() - 1 ||
      biases_.size() != weights_.size()) {
    throw std::invalid_argument("Mlp: inconsistent layer structure");
  }
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (weights_[l].rows() != layer_dims_[l + 1] ||
        weights_[l].cols() != layer_dims_[l] ||
        biases_[l].size() != layer_dims_[l + 1]) {
      throw std::invalid_argument("Mlp: parameter shape mismatch");
    }
  }
}

Vec Mlp::forward(const Vec& input) const {
  if (input.size() != input_dim()) {
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  }
  if (!input.allFinite()) {
    throw std::invalid_argument("Mlp::forward: non-finite input");
  }
  Vec a = input;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Vec z = weights_[l] * a + biases_[l];
    a = apply_activation(z, activation_at(l), init_.output_bound);
  }
  return a;
}

Vec Mlp::forward(const Vec& input, GradientTape& tape) const {
  if (input.size() != input_dim()) {
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  }
  if (!input.allFinite()) {
    throw std::invalid_argument("Mlp::forward: non-finite input");
  }
  const std::size_t layers = weights_.size();
  tape.acts.resize(layers + 1);
  tape.pre_acts.resize(layers);
  tape.acts[0] = input;
  for (std::size_t l = 0; l < layers; ++l) {
    tape.pre_acts[l].noalias() = weights_[l] * tape.acts[l];
    tape.pre_acts[l] += biases_[l];
    tape.acts[l + 1] =
        apply_activation(tape.pre_acts[l], activation_at(l), init_.output_bound);
  }
  return tape.acts[layers];
}

Vec Mlp::activation_derivative(std::size_t layer,
                               const GradientTape& tape) const {
  const Vec& z = tape.pre_acts[layer];
  const Vec& a = tape.acts[layer + 1];
  switch (activation_at(layer)) {
    case Activation::kRelu:
      return (z.array() > 0.0).cast<double>();
    case Activation::kTanh:
      return 1.0 - a.array().square();
    case Activation::kLinear:
      return Vec::Ones(z.size());
    case Activation::kScaledTanh: {
      const double b = init_.output_bound;
      return b - a.array().square() / b;
    }
  }
  throw std::logic_error("unknown activation");
}

void Mlp::backward(const GradientTape& tape, const Vec& output_grad,
                   MlpGradients& out) const {
  const std::size_t layers = weights_.size();
  if (tape.acts.size() != layers + 1 || tape.pre_acts.size() != layers) {
    throw std::invalid_argument("Mlp::backward: tape does not match network");
  }
  for (std::size_t l = 0; l <= layers; ++l) {
    if (tape.acts[l].size() != layer_dims_[l]) {
      throw std::invalid_argument("Mlp::backward: tape does not match network");
    }
  }
  if (output_grad.size() != output_dim()) {
    throw std::invalid_argument("Mlp::backward: output_grad size mismatch");
  }

  out.resize_like(*this);
  Vec delta = output_grad.cwiseProduct(activation_derivative(layers - 1, tape));
  for (std::size_t l = layers - 1;; --l) {
    out.weights[l].noalias() = delta * tape.acts[l].transpose();
    out.biases[l] = delta;
    if (l == 0) break;
    Vec upstream = weights_[l].transpose() * delta;
    delta = upstream.cwiseProduct(activation_derivative(l - 1, tape));
  }
  out.input.noalias() = weights_[0].transpose() * delta;
}

bool Mlp::finite() const {
  for (const auto& w : weights_) {
    if (!w.allFinite()) return false;
  }
  for (const auto& b : biases_) {
    if (!b.allFinite()) return false;
  }
  return true;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += static_cast<std::size_t>(weights_[l].size()) +
         static_cast<std::size_t>(biases_[l].size());
  }
  return n;
}

}  // namespace swingup
