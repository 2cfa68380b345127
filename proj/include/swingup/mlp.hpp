#pragma once

#include <cstddef>
#include <vector>

#include "swingup/rng.hpp"
#include "swingup/types.hpp"

namespace swingup {

enum class Activation { kRelu, kTanh, kLinear, kScaledTanh };

/// Initialization recipe for an Mlp.
struct MlpInit {
  Activation hidden = Activation::kRelu;
  Activation output = Activation::kLinear;
  double output_bound = 1.0;  ///< range of a scaled-tanh head
  /// When > 0, the final layer's weights are drawn from U[-limit, limit]
  /// instead of the Glorot range (used for policy heads that should start
  /// near zero).
  double final_layer_limit = 0.0;
};

/// Forward-pass cache consumed by Mlp::backward.
struct GradientTape {
  std::vector<Vec> pre_acts;  ///< z_l = W_l a_{l-1} + b_l
  std::vector<Vec> acts;      ///< a_0 = input, a_{l+1} = act(z_l)
};

class Mlp;

/// Parameter gradients plus the gradient with respect to the input vector.
struct MlpGradients {
  std::vector<Mat> weights;
  std::vector<Vec> biases;
  Vec input;

  void resize_like(const Mlp& net);
  void set_zero_like(const Mlp& net);
  /// this += alpha * other
  void axpy(double alpha, const MlpGradients& other);
  void scale(double alpha);
  bool finite() const;
};

/// Dense feed-forward network in 64-bit floats. Weights are (out x in)
/// matrices; biases start at zero; hidden weights are Glorot-uniform,
/// U[-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))], drawn row by
/// row so a seed pins the parameters bit for bit.
class Mlp {
 public:
  Mlp() = default;
  Mlp(const std::vector<int>& layer_dims, const MlpInit& init, Rng& rng);
  /// Reassembles a network from explicit parameters (deserialization).
  Mlp(std::vector<int> layer_dims, const MlpInit& init, std::vector<Mat> weights,
      std::vector<Vec> biases);

  Vec forward(const Vec& input) const;
  /// Forward pass that records the tape needed for backward().
  Vec forward(const Vec& input, GradientTape& tape) const;

  /// Gradients of (output_grad . output) with respect to every parameter
  /// and to the input. The tape must come from a forward() on this network.
  void backward(const GradientTape& tape, const Vec& output_grad,
                MlpGradients& out) const;

  const std::vector<int>& layer_dims() const { return layer_dims_; }
  int input_dim() const { return layer_dims_.front(); }
  int output_dim() const { return layer_dims_.back(); }
  std::size_t layer_count() const { return weights_.size(); }

  Mat& weight(std::size_t layer) { return weights_[layer]; }
  const Mat& weight(std::size_t layer) const { return weights_[layer]; }
  Vec& bias(std::size_t layer) { return biases_[layer]; }
  const Vec& bias(std::size_t layer) const { return biases_[layer]; }

  Activation hidden_activation() const { return init_.hidden; }
  Activation output_activation() const { return init_.output; }
  double output_bound() const { return init_.output_bound; }

  bool finite() const;
  std::size_t parameter_count() const;

 private:
  Activation activation_at(std::size_t layer) const {
    return layer + 1 == weights_.size() ? init_.output : init_.hidden;
  }
  Vec activation_derivative(std::size_t layer, const GradientTape& tape) const;

  std::vector<int> layer_dims_;
  std::vector<Mat> weights_;
  std::vector<Vec> biases_;
  MlpInit init_;
};

}  // namespace swingup
