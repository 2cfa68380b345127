#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swingup/checkpoint.hpp"
#include "swingup/config.hpp"
#include "swingup/run_log.hpp"

namespace swingup {

/// Index (0-based) of the first episode at which the trailing-`window`
/// average has stayed above `threshold` for `patience` consecutive
/// episodes, recomputable from the log alone.
std::optional<int> first_solve_episode(const std::vector<double>& rewards,
                                       double threshold, int window,
                                       int patience);

struct DdpgRunResult {
  RunLog log;
  std::unique_ptr<DdpgAgent> agent;
  std::size_t replay_size = 0;
  int episodes_run = 0;
  bool solved = false;
};

struct PpoRunResult {
  RunLog log;
  std::unique_ptr<PpoAgent> agent;
  int total_episodes = 0;
  std::size_t buffer_size_after = 0;
  int seasons_run = 0;
  bool solved = false;
};

/// Off-policy loop: one exploratory step per environment step, one (or
/// `updates_per_step`) train steps once the replay buffer can fill a batch,
/// OU noise reset per episode. Stops early once avg40 stays above the solve
/// threshold for `solve_patience` consecutive episodes. When
/// cfg.output_dir is set, writes log.csv, config.echo, and checkpoint.final.
DdpgRunResult run_ddpg(const TrainConfig& cfg);

/// On-policy loop: each season collects `rollout_size` steps (sealing paths
/// at episode ends, bootstrapping the truncation state unless disabled),
/// trains once, clears the buffer, and stops when the season score passes
/// the solve threshold. File outputs as in run_ddpg.
PpoRunResult run_ppo(const TrainConfig& cfg);

/// Greedy rollouts from a checkpoint; returns the mean episode reward.
double evaluate_checkpoint(const std::string& checkpoint_path, int episodes,
                           std::uint64_t seed);

}  // namespace swingup
