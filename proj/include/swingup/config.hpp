#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "swingup/ddpg_agent.hpp"
#include "swingup/ppo_agent.hpp"

namespace swingup {

enum class Algo { kDdpg, kPpo };

/// Thrown for malformed configuration or command-line input; the CLI maps
/// it to exit code 1 (usage error).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full hyperparameter record for one training run. Every field has a
/// default; configuration files may override any of them and unknown keys
/// are a hard error.
struct TrainConfig {
  Algo algo = Algo::kDdpg;
  PpoMethod method = PpoMethod::kClip;
  std::uint64_t seed = 0;
  int max_episodes = 200;  ///< DDPG episode budget
  int max_seasons = 40;    ///< PPO season budget
  double solve_threshold = -200.0;
  std::string output_dir;

  // DDPG
  double ddpg_actor_lr = 1e-3;
  double ddpg_critic_lr = 2e-3;
  double ddpg_gamma = 0.99;
  double tau = 0.005;
  std::size_t ddpg_batch_size = 64;
  std::size_t replay_capacity = 20000;
  int updates_per_step = 1;
  NoiseKind noise = NoiseKind::kOrnsteinUhlenbeck;
  int solve_patience = 10;  ///< consecutive episodes of avg40 above threshold

  // PPO
  double ppo_actor_lr = 1e-4;
  double ppo_critic_lr = 2e-4;
  double ppo_gamma = 0.9;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  double kl_beta = 0.5;
  double kl_target = 0.01;
  double entropy_coeff = 0.01;
  int train_epochs = 20;
  std::size_t ppo_batch_size = 200;
  std::size_t rollout_size = 10000;
  bool normalize_adv = true;
  bool bootstrap_truncation = true;
};

/// Applies one `key = value` assignment. Throws UsageError for unknown keys
/// or unparsable values.
void apply_key(TrainConfig& cfg, const std::string& key,
               const std::string& value);

/// Parses a flat `key = value` file ('#' comments, blank lines allowed).
TrainConfig parse_config_file(const std::string& path);

/// Every key in a fixed order with the current values; written verbatim to
/// config.echo and into checkpoints.
std::string config_to_text(const TrainConfig& cfg);

std::string to_string(Algo algo);
std::string to_string(PpoMethod method);
std::string to_string(NoiseKind noise);

DdpgConfig make_ddpg_config(const TrainConfig& cfg);
PpoConfig make_ppo_config(const TrainConfig& cfg);

}  // namespace swingup
