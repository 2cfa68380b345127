#pragma once

#include <string>
#include <utility>
#include <vector>

#include "swingup/config.hpp"
#include "swingup/ddpg_agent.hpp"
#include "swingup/ppo_agent.hpp"

namespace swingup {

/// Checkpoints are structured text documents carrying the algorithm tag, a
/// full config echo, and every network's layer dims plus row-major
/// parameters printed with 17 significant digits, so a load reproduces the
/// saved policy bit for bit. Malformed or truncated files, a wrong
/// algorithm tag, or dimension mismatches throw std::runtime_error and
/// produce no partial agent.

void save_checkpoint(const DdpgAgent& agent, const TrainConfig& cfg,
                     const std::string& path);
void save_checkpoint(const PpoAgent& agent, const TrainConfig& cfg,
                     const std::string& path);

Algo checkpoint_algo(const std::string& path);

DdpgAgent load_ddpg_checkpoint(const std::string& path,
                               TrainConfig* cfg_out = nullptr);
PpoAgent load_ppo_checkpoint(const std::string& path,
                             TrainConfig* cfg_out = nullptr);

/// Metadata summary for the `inspect` subcommand.
struct CheckpointInfo {
  Algo algo = Algo::kDdpg;
  TrainConfig config;
  std::vector<std::pair<std::string, std::vector<int>>> nets;
  std::size_t parameter_count = 0;
  double beta = 0.0;  ///< PPO only
};

CheckpointInfo inspect_checkpoint(const std::string& path);

}  // namespace swingup
