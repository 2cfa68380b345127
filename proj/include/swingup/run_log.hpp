#pragma once

#include <string>
#include <vector>

#include "swingup/config.hpp"

namespace swingup {

struct DdpgLogRow {
  int episode = 0;
  double total_reward = 0.0;
  double avg40_reward = 0.0;  ///< mean of the last min(40, episode) rewards
};

struct PpoLogRow {
  int season = 0;
  double season_score = 0.0;  ///< mean episodic reward within the season
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double mean_kl = 0.0;
  double beta = 0.0;
};

/// Per-episode (DDPG) or per-season (PPO) metric rows; only the vector
/// matching `algo` is populated.
struct RunLog {
  Algo algo = Algo::kDdpg;
  std::vector<DdpgLogRow> ddpg_rows;
  std::vector<PpoLogRow> ppo_rows;
};

/// CSV with a header row naming every field; floats carry 15 significant
/// digits. Throws std::runtime_error with the path on I/O failure.
void write_log(const RunLog& log, const std::string& path);

/// Parses a file produced by write_log (row kind inferred from the header).
RunLog read_log(const std::string& path);

}  // namespace swingup
