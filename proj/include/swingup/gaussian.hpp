#pragma once

#include "swingup/rng.hpp"
#include "swingup/types.hpp"

namespace swingup {

double softplus(double x);
Vec softplus(const Vec& x);
Vec sigmoid(const Vec& x);
/// Inverse of softplus on (0, inf).
double softplus_inverse(double y);

/// Diagonal Gaussian with strictly positive, finite scale. Policy code
/// builds it through from_raw_std(), which applies the
/// softplus(raw) + kStdFloor parameterization.
struct DiagGaussian {
  static constexpr double kStdFloor = 1e-4;

  Vec mean;
  Vec std;

  DiagGaussian(Vec mean_in, Vec std_in);
  static DiagGaussian from_raw_std(Vec mean_in, const Vec& raw_std);

  /// mean + std .* z with z standard normal, one draw per dimension.
  Vec sample(Rng& rng) const;

  /// sum_i [ -0.5*((x_i-mu_i)/sigma_i)^2 - ln(sigma_i) - 0.5*ln(2*pi) ]
  double log_prob(const Vec& x) const;

  /// sum_i [ 0.5 + 0.5*ln(2*pi) + ln(sigma_i) ]
  double entropy() const;
};

/// KL(old || new) = sum_i [ ln(s2/s1) + (s1^2 + (m1-m2)^2) / (2*s2^2) - 0.5 ].
/// This ordering (old first) is used everywhere in the project.
double kl_divergence(const DiagGaussian& old_d, const DiagGaussian& new_d);

/// Gradient with respect to a distribution's mean and std.
struct DistGrad {
  Vec mean;
  Vec std;
};

DistGrad log_prob_grad(const DiagGaussian& d, const Vec& x);
DistGrad entropy_grad(const DiagGaussian& d);
/// d KL(old || new) / d(new mean, new std).
DistGrad kl_grad_new(const DiagGaussian& old_d, const DiagGaussian& new_d);

}  // namespace swingup
