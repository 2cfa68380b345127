#pragma once

#include <cstdint>

#include "swingup/mlp.hpp"
#include "swingup/types.hpp"

namespace swingup {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam over one network's parameter set. update() takes a
/// DESCENT step; callers maximizing an objective pass the negated gradient.
/// A non-finite gradient throws and leaves parameters, moments, and the
/// step counter untouched; parameters are verified finite after every step.
class MlpAdam {
 public:
  MlpAdam() = default;
  MlpAdam(const Mlp& net, AdamConfig cfg);

  void update(Mlp& net, const MlpGradients& grads);

  std::int64_t step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_{};
  std::vector<Mat> m_w_, v_w_;
  std::vector<Vec> m_b_, v_b_;
  std::int64_t t_ = 0;
};

/// Same update rule for a flat parameter vector.
class VectorAdam {
 public:
  VectorAdam() = default;
  VectorAdam(Eigen::Index dim, AdamConfig cfg);

  void update(Vec& params, const Vec& grad);

  std::int64_t step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_{};
  Vec m_, v_;
  std::int64_t t_ = 0;
};

}  // namespace swingup
