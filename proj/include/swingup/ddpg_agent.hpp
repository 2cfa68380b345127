#pragma once

#include <utility>
#include <vector>

#include "swingup/adam.hpp"
#include "swingup/buffers.hpp"
#include "swingup/mlp.hpp"
#include "swingup/rng.hpp"
#include "swingup/types.hpp"

namespace swingup {

struct OuNoiseConfig {
  double theta = 0.15;
  double sigma = 0.4;  ///< 0.2 * max torque
  double dt = 0.01;
  double mean = 0.0;
};

/// Ornstein-Uhlenbeck process: state += theta*(mean - state)*dt +
/// sigma*sqrt(dt)*z. Reset to zero at the start of each episode.
class OuNoise {
 public:
  explicit OuNoise(int dim, OuNoiseConfig cfg = {});

  void reset();
  const Vec& step(Rng& rng);
  Vec& state() { return state_; }
  const Vec& state() const { return state_; }
  const OuNoiseConfig& config() const { return cfg_; }

 private:
  OuNoiseConfig cfg_;
  Vec state_;
};

enum class NoiseKind { kOrnsteinUhlenbeck, kGaussian };

struct DdpgConfig {
  double actor_lr = 1e-3;
  double critic_lr = 2e-3;
  double gamma = 0.99;
  double tau = 0.005;
  std::size_t batch_size = 64;
  double max_action = 2.0;
  NoiseKind noise = NoiseKind::kOrnsteinUhlenbeck;
  OuNoiseConfig ou{};
  double gaussian_noise_std = 0.2;  ///< 0.1 * max torque
};

struct DdpgLosses {
  double critic_loss = 0.0;      ///< mean squared Bellman error, pre-update
  double actor_objective = 0.0;  ///< mean Q(s, mu(s)), pre-update
};

/// Deterministic policy gradient agent: actor mu(s) with a scaled-tanh head,
/// Q critic over the concatenated [observation; action] input, target copies
/// of both, and Polyak-averaged target updates. Target networks start as
/// exact copies of the main networks.
class DdpgAgent {
 public:
  DdpgAgent(DdpgConfig cfg, Rng& rng);

  /// clamp(mu(s) + noise, -max_action, max_action) when exploring, otherwise
  /// clamp(mu(s), ...).
  double act(const Vec& obs, bool explore, Rng& rng);

  void reset_noise() { noise_.reset(); }

  /// y_i = r + gamma * (1 - d) * Q_targ(s', mu_targ(s')). Target networks
  /// only.
  std::vector<double> compute_targets(
      const std::vector<Transition>& batch) const;

  /// One off-policy update: critic descends on the mean squared Bellman
  /// error, actor ascends on mean Q(s, mu(s)) with the critic frozen, then
  /// both target networks take a Polyak step. Throws when the buffer holds
  /// fewer than batch_size transitions.
  DdpgLosses train_step(ReplayBuffer& buf, Rng& rng);

  /// Critic descent against compute_targets(batch); returns the pre-update
  /// mean squared Bellman error.
  double critic_step(const std::vector<Transition>& batch);

  /// Actor ascent on mean Q(s, mu(s)), critic parameters frozen; returns
  /// the pre-update objective.
  double actor_step(const std::vector<Transition>& batch);

  /// Polyak step on both target networks.
  void update_targets();

  /// target <- (1 - tau) * target + tau * main, elementwise.
  static void polyak_update(Mlp& target, const Mlp& main, double tau);

  const DdpgConfig& config() const { return cfg_; }
  Mlp& actor() { return actor_; }
  const Mlp& actor() const { return actor_; }
  Mlp& critic() { return critic_; }
  const Mlp& critic() const { return critic_; }
  Mlp& actor_target() { return actor_target_; }
  const Mlp& actor_target() const { return actor_target_; }
  Mlp& critic_target() { return critic_target_; }
  const Mlp& critic_target() const { return critic_target_; }

 private:
  Vec critic_input(const Vec& obs, double action) const;

  DdpgConfig cfg_;
  Mlp actor_;
  Mlp critic_;
  Mlp actor_target_;
  Mlp critic_target_;
  MlpAdam actor_opt_;
  MlpAdam critic_opt_;
  OuNoise noise_;
};

}  // namespace swingup
