#include "swingup/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace swingup {

namespace {

// p -= lr * m_hat / (sqrt(v_hat) + eps), with m_hat = m / bc1, v_hat = v / bc2.
template <typename T>
void adam_step(T& p, const T& g, T& m, T& v, const AdamConfig& c, double bc1,
               double bc2) {
  m = c.beta1 * m + (1.0 - c.beta1) * g;
  v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
  p.array() -=
      c.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + c.epsilon);
}

}  // namespace

MlpAdam::MlpAdam(const Mlp& net, AdamConfig cfg) : cfg_(cfg) {
  m_w_.reserve(net.layer_count());
  v_w_.reserve(net.layer_count());
  m_b_.reserve(net.layer_count());
  v_b_.reserve(net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    m_w_.push_back(Mat::Zero(net.weight(l).rows(), net.weight(l).cols()));
    v_w_.push_back(Mat::Zero(net.weight(l).rows(), net.weight(l).cols()));
    m_b_.push_back(Vec::Zero(net.bias(l).size()));
    v_b_.push_back(Vec::Zero(net.bias(l).size()));
  }
}

void MlpAdam::update(Mlp& net, const MlpGradients& grads) {
  if (grads.weights.size() != net.layer_count() ||
      m_w_.size() != net.layer_count()) {
    throw std::invalid_argument("MlpAdam::update: gradient shape mismatch");
  }
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    if (grads.weights[l].rows() != net.weight(l).rows() ||
        grads.weights[l].cols() != net.weight(l).cols() ||
        grads.biases[l].size() != net.bias(l).size()) {
      throw std::invalid_argument("MlpAdam::update: gradient shape mismatch");
    }
  }
  if (!grads.finite()) {
    throw std::runtime_error("MlpAdam::update: non-finite gradient");
  }

  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    adam_step(net.weight(l), grads.weights[l], m_w_[l], v_w_[l], cfg_, bc1, bc2);
    adam_step(net.bias(l), grads.biases[l], m_b_[l], v_b_[l], cfg_, bc1, bc2);
  }
  if (!net.finite()) {
    throw std::runtime_error("MlpAdam::update: parameters became non-finite");
  }
}

VectorAdam::VectorAdam(Eigen::Index dim, AdamConfig cfg)
    : cfg_(cfg), m_(Vec::Zero(dim)), v_(Vec::Zero(dim)) {}

void VectorAdam::update(Vec& params, const Vec& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("VectorAdam::update: shape mismatch");
  }
  if (!grad.allFinite()) {
    throw std::runtime_error("VectorAdam::update: non-finite gradient");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  adam_step(params, grad, m_, v_, cfg_, bc1, bc2);
  if (!params.allFinite()) {
    throw std::runtime_error("VectorAdam::update: parameters became non-finite");
  }
}

}  // namespace swingup
