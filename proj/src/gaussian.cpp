#include "swingup/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swingup {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2*pi)
}

double softplus(double x) {
  // ln(1 + e^x), stable on both tails
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

Vec softplus(const Vec& x) {
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = softplus(x[i]);
  return y;
}

Vec sigmoid(const Vec& x) {
  return (1.0 + (-x.array()).exp()).inverse();
}

double softplus_inverse(double y) {
  if (y <= 0.0) throw std::invalid_argument("softplus_inverse: y must be > 0");
  return std::log(std::expm1(y));
}

DiagGaussian::DiagGaussian(Vec mean_in, Vec std_in)
    : mean(std::move(mean_in)), std(std::move(std_in)) {
  if (mean.size() != std.size()) {
    throw std::invalid_argument("DiagGaussian: mean/std dim mismatch");
  }
  if (!mean.allFinite() || !std.allFinite() || (std.array() <= 0.0).any()) {
    throw std::invalid_argument("DiagGaussian: std must be positive and finite");
  }
}

DiagGaussian DiagGaussian::from_raw_std(Vec mean_in, const Vec& raw_std) {
  Vec s = softplus(raw_std);
  s.array() += kStdFloor;
  return DiagGaussian(std::move(mean_in), std::move(s));
}

Vec DiagGaussian::sample(Rng& rng) const {
  Vec z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return mean + std.cwiseProduct(z);
}

double DiagGaussian::log_prob(const Vec& x) const {
  if (x.size() != mean.size()) {
    throw std::invalid_argument("DiagGaussian::log_prob: dim mismatch");
  }
  const auto z = (x - mean).cwiseQuotient(std).array();
  return (-0.5 * z.square() - std.array().log() - 0.5 * kLog2Pi).sum();
}

double DiagGaussian::entropy() const {
  return (0.5 + 0.5 * kLog2Pi + std.array().log()).sum();
}

double kl_divergence(const DiagGaussian& old_d, const DiagGaussian& new_d) {
  if (old_d.mean.size() != new_d.mean.size()) {
    throw std::invalid_argument("kl_divergence: dim mismatch");
  }
  const auto s1 = old_d.std.array();
  const auto s2 = new_d.std.array();
  const auto dm = (old_d.mean - new_d.mean).array();
  return ((s2 / s1).log() + (s1.square() + dm.square()) / (2.0 * s2.square()) -
          0.5)
      .sum();
}

DistGrad log_prob_grad(const DiagGaussian& d, const Vec& x) {
  const auto diff = (x - d.mean).array();
  const auto s = d.std.array();
  DistGrad g;
  g.mean = (diff / s.square()).matrix();
  g.std = (diff.square() / s.cube() - 1.0 / s).matrix();
  return g;
}

DistGrad entropy_grad(const DiagGaussian& d) {
  DistGrad g;
  g.mean = Vec::Zero(d.mean.size());
  g.std = d.std.cwiseInverse();
  return g;
}

DistGrad kl_grad_new(const DiagGaussian& old_d, const DiagGaussian& new_d) {
  const auto s1 = old_d.std.array();
  const auto s2 = new_d.std.array();
  const auto dm = (new_d.mean - old_d.mean).array();
  DistGrad g;
  g.mean = (dm / s2.square()).matrix();
  g.std = (1.0 / s2 - (s1.square() + dm.square()) / s2.cube()).matrix();
  return g;
}

}  // namespace swingup
