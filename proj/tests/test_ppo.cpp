#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swingup/ppo_agent.hpp"
#include "test_helpers.hpp"

using swingup::DiagGaussian;
using swingup::Mlp;
using swingup::PolicySample;
using swingup::PpoAgent;
using swingup::PpoConfig;
using swingup::PpoMethod;
using swingup::PpoTrainStats;
using swingup::RolloutBuffer;
using swingup::Rng;
using swingup::Vec;

namespace {

Vec random_obs(Rng& rng) {
  const double theta = rng.uniform(-3.14, 3.14);
  Vec s(3);
  s << std::cos(theta), std::sin(theta), rng.uniform(-8.0, 8.0);
  return s;
}

// Collects `episodes` segments of `len` steps with the agent's own policy,
// so the stored log-probabilities match the collection-time parameters.
RolloutBuffer collected_rollout(PpoAgent& agent, Rng& rng, int episodes,
                                int len, double gamma = 0.9,
                                double lambda = 0.95) {
  RolloutBuffer buf(static_cast<std::size_t>(episodes * len), gamma, lambda);
  for (int e = 0; e < episodes; ++e) {
    for (int t = 0; t < len; ++t) {
      const Vec obs = random_obs(rng);
      const PolicySample ps = agent.act(obs, rng);
      buf.add(obs, ps.action, rng.uniform(-16.0, 0.0), ps.value, ps.logp);
    }
    buf.finish_path(rng.uniform(-5.0, 0.0));
  }
  return buf;
}

std::vector<int> all_indices(const RolloutBuffer& buf) {
  std::vector<int> idx(buf.size());
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

TEST_SUITE("ppo") {

TEST_CASE("network layout and initial std") {
  Rng rng(1);
  const PpoAgent agent({}, rng);
  CHECK(agent.actor_mean().layer_dims() ==
        std::vector<int>{3, 128, 64, 64, 1});
  CHECK(agent.critic().layer_dims() == std::vector<int>{3, 64, 64, 64, 1});
  const Vec std = swingup::softplus(agent.raw_std()).array() +
                  DiagGaussian::kStdFloor;
  CHECK(std.size() == 1);
  CHECK(std::abs(std[0] - 1.0) < 1e-12);
  CHECK(agent.beta() == 0.5);
}

TEST_CASE("degenerate std collapses the action onto the mean") {
  Rng rng(2);
  PpoAgent agent({}, rng);
  agent.actor_mean().weight(3).setZero();
  agent.actor_mean().bias(3).setZero();
  agent.raw_std() = Vec::Constant(1, -40.0);  // std floors at 1e-4
  for (int i = 0; i < 100; ++i) {
    const PolicySample ps = agent.act(random_obs(rng), rng);
    CHECK(std::abs(ps.action[0]) < 1e-3);
  }
}

TEST_CASE("recorded logp matches the policy distribution") {
  Rng rng(3);
  PpoAgent agent({}, rng);
  for (int i = 0; i < 50; ++i) {
    const Vec obs = random_obs(rng);
    const PolicySample ps = agent.act(obs, rng);
    CHECK(ps.logp == agent.distribution(obs).log_prob(ps.action));
    CHECK(ps.value == agent.value(obs));
  }
}

TEST_CASE("clip objective hand cases") {
  CHECK(PpoAgent::clip_objective(1.0, 1.0, 0.2) == 1.0);
  CHECK(PpoAgent::clip_objective(2.0, 1.0, 0.2) == doctest::Approx(1.2));
  CHECK(PpoAgent::clip_objective(0.5, -1.0, 0.2) == doctest::Approx(-0.8));
}

TEST_CASE("clip objective equals the clamped-ratio form everywhere") {
  Rng rng(4);
  for (int i = 0; i < 100000; ++i) {
    const double ratio = rng.uniform(0.0, 3.0);
    const double adv = rng.uniform(-5.0, 5.0);
    const double eps = rng.uniform(0.01, 0.9);
    const double clamped = std::min(
        ratio * adv, std::clamp(ratio, 1.0 - eps, 1.0 + eps) * adv);
    CHECK(PpoAgent::clip_objective(ratio, adv, eps) == clamped);
  }
}

TEST_CASE("pre-update ratios are one and the surrogate equals mean advantage") {
  Rng rng(5);
  PpoConfig cfg;
  cfg.entropy_coeff = 0.0;
  PpoAgent agent(cfg, rng);
  RolloutBuffer buf = collected_rollout(agent, rng, 4, 25);

  // stored logp matches the current policy, so every ratio is exactly one
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const double logp_now = agent.distribution(buf.obs(i)).log_prob(buf.action(i));
    CHECK(std::abs(std::exp(logp_now - buf.logp(i)) - 1.0) < 1e-9);
  }

  SUBCASE("raw advantages") {
    double mean_adv = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) mean_adv += buf.advantage(i);
    mean_adv /= static_cast<double>(buf.size());
    const auto ev = agent.eval_surrogate(buf, all_indices(buf),
                                         agent.actor_mean(), agent.raw_std(),
                                         /*with_grad=*/false);
    CHECK(std::abs(ev.objective - mean_adv) < 1e-9);
    CHECK(std::abs(ev.mean_kl) < 1e-12);
  }
  SUBCASE("normalized advantages zero the surrogate") {
    Rng shuffle_rng(6);
    buf.minibatch_indices(50, shuffle_rng, /*normalize_adv=*/true);
    const auto ev = agent.eval_surrogate(buf, all_indices(buf),
                                         agent.actor_mean(), agent.raw_std(),
                                         false);
    CHECK(std::abs(ev.objective) < 1e-9);
  }
}

TEST_CASE("adapt_beta follows the doubling and halving rules") {
  CHECK(PpoAgent::adapt_beta(0.5, 0.02, 0.01) == 1.0);
  CHECK(PpoAgent::adapt_beta(0.5, 0.005, 0.01) == 0.25);
  CHECK(PpoAgent::adapt_beta(0.5, 0.01, 0.01) == 0.5);
  // boundary cases sit on the thresholds themselves
  CHECK(PpoAgent::adapt_beta(0.5, 0.015, 0.01) == 1.0);
  CHECK(PpoAgent::adapt_beta(0.5, 0.01 / 1.5, 0.01) == 0.25);
  // clamping
  CHECK(PpoAgent::adapt_beta(8.0, 1.0, 0.01) == 10.0);
  CHECK(PpoAgent::adapt_beta(1.5e-4, 1e-6, 0.01) == 1e-4);
}

TEST_CASE("adapt_beta is monotone in the measured divergence") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double beta = rng.uniform(1e-3, 5.0);
    const double target = rng.uniform(1e-3, 0.1);
    const double k1 = rng.uniform(0.0, 0.3);
    const double k2 = k1 + rng.uniform(0.0, 0.3);
    CHECK(PpoAgent::adapt_beta(beta, k2, target) >=
          PpoAgent::adapt_beta(beta, k1, target));
  }
}

TEST_CASE("penalty objective gradient matches finite differences") {
  Rng rng(8);
  PpoConfig cfg;
  cfg.method = PpoMethod::kPenalty;
  PpoAgent agent(cfg, rng);
  RolloutBuffer buf = collected_rollout(agent, rng, 2, 10);

  // move the policy off the collection snapshot so the KL term is active
  const Mlp old_actor = agent.actor_mean();
  const Vec old_raw = agent.raw_std();
  for (std::size_t l = 0; l < agent.actor_mean().layer_count(); ++l) {
    auto& w = agent.actor_mean().weight(l);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        w(r, c) += 0.01 * rng.normal();
      }
    }
  }
  agent.raw_std()[0] += 0.05;

  const auto idx = all_indices(buf);
  const auto ev =
      agent.eval_surrogate(buf, idx, old_actor, old_raw, /*with_grad=*/true);
  const auto objective = [&]() {
    return agent
        .eval_surrogate(buf, idx, old_actor, old_raw, /*with_grad=*/false)
        .objective;
  };

  // spot-check a spread of parameter coordinates plus the raw std
  std::vector<double> flat;
  testutil::for_each_gradient(ev.d_actor,
                              [&flat](double g) { flat.push_back(g); });
  std::size_t k = 0;
  std::size_t checked = 0;
  testutil::for_each_parameter(agent.actor_mean(), [&](double& p) {
    const std::size_t coord = k++;
    if (coord % 947 != 0) return;  // ~18 coordinates across all layers
    const double fd = testutil::central_diff(p, objective);
    const double a = flat[coord];
    const double scale = std::max(std::abs(a), std::abs(fd));
    if (scale > 1e-7) {
      CHECK(std::abs(a - fd) / scale < 1e-3);
      ++checked;
    }
  });
  CHECK(checked > 5);

  const double fd_raw = testutil::central_diff(agent.raw_std()[0], objective);
  CHECK(std::abs(ev.d_raw_std[0] - fd_raw) /
            std::max({std::abs(fd_raw), std::abs(ev.d_raw_std[0]), 1e-7}) <
        1e-3);
}

TEST_CASE("clip objective gradient matches finite differences") {
  Rng rng(9);
  PpoConfig cfg;
  cfg.method = PpoMethod::kClip;
  PpoAgent agent(cfg, rng);
  RolloutBuffer buf = collected_rollout(agent, rng, 2, 10);
  const Mlp old_actor = agent.actor_mean();
  const Vec old_raw = agent.raw_std();
  agent.raw_std()[0] += 0.03;

  const auto idx = all_indices(buf);
  const auto ev = agent.eval_surrogate(buf, idx, old_actor, old_raw, true);
  const double fd_raw = testutil::central_diff(agent.raw_std()[0], [&]() {
    return agent.eval_surrogate(buf, idx, old_actor, old_raw, false).objective;
  });
  CHECK(std::abs(ev.d_raw_std[0] - fd_raw) /
            std::max({std::abs(fd_raw), std::abs(ev.d_raw_std[0]), 1e-7}) <
        1e-3);
}

TEST_CASE("training requires a sealed buffer") {
  Rng rng(10);
  PpoAgent agent({}, rng);
  RolloutBuffer empty(16, 0.9, 0.95);
  CHECK_THROWS_AS(agent.train(empty, rng), std::runtime_error);
  empty.add(random_obs(rng), Vec::Zero(1), -1.0, 0.0, 0.0);
  CHECK_THROWS_AS(agent.train(empty, rng), std::runtime_error);
}

TEST_CASE("one training epoch lowers the buffer-wide critic loss") {
  int lowered = 0;
  const int trials = 30;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(4000 + static_cast<std::uint64_t>(trial));
    PpoConfig cfg;
    cfg.epochs = 1;
    PpoAgent agent(cfg, rng);
    RolloutBuffer buf = collected_rollout(agent, rng, 4, 25);
    const auto idx = all_indices(buf);
    const double before = agent.critic_loss(buf, idx);
    agent.train(buf, rng);
    if (agent.critic_loss(buf, idx) < before) ++lowered;
  }
  CHECK(lowered >= 27);  // >= 90%
}

TEST_CASE("train returns sane stats and adapts beta only for penalty") {
  Rng rng(11);
  PpoConfig cfg;
  cfg.epochs = 2;
  cfg.method = PpoMethod::kClip;
  PpoAgent clip_agent(cfg, rng);
  RolloutBuffer buf = collected_rollout(clip_agent, rng, 4, 25);
  const PpoTrainStats stats = clip_agent.train(buf, rng);
  CHECK(stats.mean_kl >= -1e-9);
  CHECK(stats.beta_after == clip_agent.beta());
  CHECK(clip_agent.beta() == cfg.beta);  // clip never adapts beta
  buf.clear();

  cfg.method = PpoMethod::kPenalty;
  PpoAgent pen_agent(cfg, rng);
  RolloutBuffer buf2 = collected_rollout(pen_agent, rng, 4, 25);
  const PpoTrainStats s2 = pen_agent.train(buf2, rng);
  CHECK(s2.mean_kl >= -1e-9);
  CHECK(s2.beta_after == pen_agent.beta());
  CHECK((pen_agent.beta() == 0.25 || pen_agent.beta() == 0.5 ||
         pen_agent.beta() == 1.0));
}

}  // TEST_SUITE
