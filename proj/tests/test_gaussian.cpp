#include <doctest.h>

#include <cmath>
#include <numbers>

#include "swingup/gaussian.hpp"
#include "test_helpers.hpp"

using swingup::DiagGaussian;
using swingup::DistGrad;
using swingup::Rng;
using swingup::Vec;

namespace {

DiagGaussian random_dist(Rng& rng, Eigen::Index dim) {
  Vec mean(dim), std(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    mean[i] = rng.uniform(-2.0, 2.0);
    std[i] = rng.uniform(0.3, 2.0);
  }
  return DiagGaussian(mean, std);
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("construction rejects bad scales") {
  CHECK_THROWS_AS(DiagGaussian(Vec::Zero(2), Vec::Zero(2)),
                  std::invalid_argument);
  Vec s(2);
  s << 1.0, -0.5;
  CHECK_THROWS_AS(DiagGaussian(Vec::Zero(2), s), std::invalid_argument);
  CHECK_THROWS_AS(DiagGaussian(Vec::Zero(2), Vec::Ones(3)),
                  std::invalid_argument);
}

TEST_CASE("raw-std parameterization applies the softplus floor") {
  const DiagGaussian d =
      DiagGaussian::from_raw_std(Vec::Zero(1), Vec::Constant(1, -40.0));
  CHECK(d.std[0] == doctest::Approx(1e-4).epsilon(1e-9));

  // softplus_inverse inverts the parameterization
  const double raw = swingup::softplus_inverse(1.0 - DiagGaussian::kStdFloor);
  const DiagGaussian unit =
      DiagGaussian::from_raw_std(Vec::Zero(1), Vec::Constant(1, raw));
  CHECK(std::abs(unit.std[0] - 1.0) < 1e-12);
}

TEST_CASE("standard normal log density at the mean") {
  const DiagGaussian d(Vec::Zero(1), Vec::Ones(1));
  const double expect = -0.5 * std::log(2.0 * std::numbers::pi);
  CHECK(std::abs(d.log_prob(Vec::Zero(1)) - expect) < 1e-9);
  CHECK(std::abs(expect - (-0.9189385332)) < 1e-9);
}

TEST_CASE("log_prob peaks at the mean") {
  Rng rng(2);
  const DiagGaussian d = random_dist(rng, 3);
  const double at_mean = d.log_prob(d.mean);
  for (int i = 0; i < 100; ++i) {
    Vec x = d.mean;
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] += rng.uniform(-1.0, 1.0);
    CHECK(d.log_prob(x) <= at_mean);
  }
}

TEST_CASE("ratio of a policy with itself is exactly one") {
  Rng rng(3);
  const DiagGaussian d = random_dist(rng, 2);
  const Vec x = d.sample(rng);
  CHECK(std::exp(d.log_prob(x) - d.log_prob(x)) == 1.0);
}

TEST_CASE("kl of identical distributions vanishes") {
  Rng rng(4);
  const DiagGaussian d = random_dist(rng, 3);
  CHECK(std::abs(swingup::kl_divergence(d, d)) < 1e-12);
}

TEST_CASE("kl closed form: unit-variance mean shift") {
  const DiagGaussian a(Vec::Ones(1), Vec::Ones(1));
  const DiagGaussian b(Vec::Zero(1), Vec::Ones(1));
  CHECK(std::abs(swingup::kl_divergence(a, b) - 0.5) < 1e-12);
}

TEST_CASE("kl is nonnegative and zero only at equality") {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const DiagGaussian a = random_dist(rng, 2);
    const DiagGaussian b = random_dist(rng, 2);
    const double kl = swingup::kl_divergence(a, b);
    CHECK(kl >= 0.0);
    const bool equal = (a.mean - b.mean).cwiseAbs().maxCoeff() < 1e-15 &&
                       (a.std - b.std).cwiseAbs().maxCoeff() < 1e-15;
    if (!equal) CHECK(kl > 0.0);
  }
}

TEST_CASE("kl closed form matches a Monte-Carlo estimate") {
  Rng rng(6);
  const DiagGaussian old_d(Vec::Constant(1, 0.5), Vec::Constant(1, 0.8));
  const DiagGaussian new_d(Vec::Constant(1, -0.3), Vec::Constant(1, 1.4));
  const double closed = swingup::kl_divergence(old_d, new_d);
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const Vec x = old_d.sample(rng);
    acc += old_d.log_prob(x) - new_d.log_prob(x);
  }
  const double mc = acc / n;
  CHECK(std::abs(mc - closed) < 0.02 * closed);
}

TEST_CASE("entropy closed form and scaling") {
  const DiagGaussian unit(Vec::Zero(1), Vec::Ones(1));
  const double expect = 0.5 * (1.0 + std::log(2.0 * std::numbers::pi));
  CHECK(std::abs(unit.entropy() - expect) < 1e-9);
  CHECK(std::abs(expect - 1.4189385332) < 1e-9);

  // strictly increasing in sigma; doubling adds ln 2 per dimension
  double prev = -1e18;
  for (double s = 0.1; s < 4.0; s += 0.1) {
    const DiagGaussian d(Vec::Zero(2), Vec::Constant(2, s));
    CHECK(d.entropy() > prev);
    prev = d.entropy();
    const DiagGaussian doubled(Vec::Zero(2), Vec::Constant(2, 2.0 * s));
    CHECK(std::abs(doubled.entropy() - d.entropy() - 2.0 * std::log(2.0)) <
          1e-12);
  }
}

TEST_CASE("sampling: degenerate scale collapses onto the mean") {
  Rng rng(7);
  const DiagGaussian d(Vec::Constant(1, 0.37), Vec::Constant(1, 1e-4));
  for (int i = 0; i < 100; ++i) {
    CHECK(std::abs(d.sample(rng)[0] - 0.37) < 1e-3);
  }
}

TEST_CASE("sampling: empirical moments of the standard normal") {
  Rng rng(8);
  const DiagGaussian d(Vec::Zero(1), Vec::Ones(1));
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = d.sample(rng)[0];
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double std = std::sqrt(sumsq / n - mean * mean);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(std - 1.0) < 0.02);
}

TEST_CASE("sampling is deterministic under a fixed seed") {
  const DiagGaussian d(Vec::Zero(2), Vec::Ones(2));
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) {
    CHECK(d.sample(a) == d.sample(b));
  }
}

TEST_CASE("log_prob integrates to one (importance-weighted quadrature)") {
  Rng rng(10);
  const DiagGaussian d(Vec::Constant(1, 0.4), Vec::Constant(1, 0.9));
  // uniform proposal spanning +-8 sigma around the mean
  const double lo = 0.4 - 8.0 * 0.9, hi = 0.4 + 8.0 * 0.9;
  const double width = hi - lo;
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    Vec x = Vec::Constant(1, rng.uniform(lo, hi));
    acc += std::exp(d.log_prob(x)) * width;
  }
  CHECK(std::abs(acc / n - 1.0) < 0.02);
}

TEST_CASE("log_prob gradients match finite differences") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Vec mean(2), raw(2), x(2);
    for (int i = 0; i < 2; ++i) {
      mean[i] = rng.uniform(-1.0, 1.0);
      raw[i] = rng.uniform(-1.0, 1.5);
      x[i] = rng.uniform(-2.0, 2.0);
    }
    const DiagGaussian d = DiagGaussian::from_raw_std(mean, raw);
    const DistGrad g = swingup::log_prob_grad(d, x);
    const Vec chain = swingup::sigmoid(raw);

    for (int i = 0; i < 2; ++i) {
      const double fd_mean = testutil::central_diff(mean[i], [&]() {
        return DiagGaussian::from_raw_std(mean, raw).log_prob(x);
      });
      CHECK(std::abs(g.mean[i] - fd_mean) <
            1e-4 * std::max(1.0, std::abs(fd_mean)));

      const double fd_raw = testutil::central_diff(raw[i], [&]() {
        return DiagGaussian::from_raw_std(mean, raw).log_prob(x);
      });
      const double analytic_raw = g.std[i] * chain[i];
      CHECK(std::abs(analytic_raw - fd_raw) <
            1e-4 * std::max(1.0, std::abs(fd_raw)));
    }
  }
}

TEST_CASE("kl and entropy gradients match finite differences") {
  Rng rng(12);
  Vec mean_old(2), std_old(2), mean(2), raw(2);
  for (int i = 0; i < 2; ++i) {
    mean_old[i] = rng.uniform(-1.0, 1.0);
    std_old[i] = rng.uniform(0.5, 1.5);
    mean[i] = rng.uniform(-1.0, 1.0);
    raw[i] = rng.uniform(-0.5, 1.0);
  }
  const DiagGaussian old_d(mean_old, std_old);
  const DiagGaussian new_d = DiagGaussian::from_raw_std(mean, raw);
  const DistGrad klg = swingup::kl_grad_new(old_d, new_d);
  const DistGrad ent = swingup::entropy_grad(new_d);
  const Vec chain = swingup::sigmoid(raw);

  for (int i = 0; i < 2; ++i) {
    const double fd_mean = testutil::central_diff(mean[i], [&]() {
      return swingup::kl_divergence(old_d,
                                    DiagGaussian::from_raw_std(mean, raw));
    });
    CHECK(std::abs(klg.mean[i] - fd_mean) <
          1e-4 * std::max(1.0, std::abs(fd_mean)));

    const double fd_raw = testutil::central_diff(raw[i], [&]() {
      return swingup::kl_divergence(old_d,
                                    DiagGaussian::from_raw_std(mean, raw));
    });
    CHECK(std::abs(klg.std[i] * chain[i] - fd_raw) <
          1e-4 * std::max(1.0, std::abs(fd_raw)));

    const double fd_ent = testutil::central_diff(raw[i], [&]() {
      return DiagGaussian::from_raw_std(mean, raw).entropy();
    });
    CHECK(std::abs(ent.std[i] * chain[i] - fd_ent) <
          1e-4 * std::max(1.0, std::abs(fd_ent)));
  }
}

}  // TEST_SUITE
