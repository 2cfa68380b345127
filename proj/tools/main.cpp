#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "swingup/checkpoint.hpp"
#include "swingup/config.hpp"
#include "swingup/trainer.hpp"

namespace {

using swingup::Algo;
using swingup::TrainConfig;

int run_train(const std::string& algo, const std::string& method,
              const std::string& config_path, const std::string& out_dir,
              long long seed, bool seed_set, int max_episodes,
              int max_seasons) {
  TrainConfig cfg;
  if (!config_path.empty()) cfg = swingup::parse_config_file(config_path);
  // command-line flags override file values
  if (!algo.empty()) swingup::apply_key(cfg, "algo", algo);
  if (!method.empty()) swingup::apply_key(cfg, "method", method);
  if (seed_set) cfg.seed = static_cast<std::uint64_t>(seed);
  if (max_episodes > 0) cfg.max_episodes = max_episodes;
  if (max_seasons > 0) cfg.max_seasons = max_seasons;
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  if (cfg.algo == Algo::kDdpg) {
    const auto result = swingup::run_ddpg(cfg);
    const auto& rows = result.log.ddpg_rows;
    std::printf("ddpg: %d episodes, %s (final avg40 %.3f)\n",
                result.episodes_run, result.solved ? "solved" : "not solved",
                rows.empty() ? 0.0 : rows.back().avg40_reward);
  } else {
    const auto result = swingup::run_ppo(cfg);
    const auto& rows = result.log.ppo_rows;
    std::printf("ppo(%s): %d seasons, %s (final season score %.3f)\n",
                swingup::to_string(cfg.method).c_str(), result.seasons_run,
                result.solved ? "solved" : "not solved",
                rows.empty() ? 0.0 : rows.back().season_score);
  }
  if (!cfg.output_dir.empty()) {
    std::printf("outputs written to %s\n", cfg.output_dir.c_str());
  }
  return 0;
}

int run_evaluate(const std::string& checkpoint, int episodes, long long seed) {
  const double mean = swingup::evaluate_checkpoint(
      checkpoint, episodes, static_cast<std::uint64_t>(seed));
  std::printf("mean reward over %d episodes: %.9g\n", episodes, mean);
  return 0;
}

int run_inspect(const std::string& checkpoint) {
  const auto info = swingup::inspect_checkpoint(checkpoint);
  std::printf("algo: %s\n", swingup::to_string(info.algo).c_str());
  if (info.algo == Algo::kPpo) {
    std::printf("method: %s\nbeta: %.9g\n",
                swingup::to_string(info.config.method).c_str(), info.beta);
  }
  std::printf("seed: %llu\n",
              static_cast<unsigned long long>(info.config.seed));
  for (const auto& [name, dims] : info.nets) {
    std::string shape;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      shape += (i ? "-" : "") + std::to_string(dims[i]);
    }
    std::printf("net %s: %s\n", name.c_str(), shape.c_str());
  }
  std::printf("parameters: %zu\n", info.parameter_count);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy-gradient training engine for the pendulum swing-up "
               "task (DDPG and PPO)"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Train an agent");
  std::string algo, method, config_path, out_dir;
  long long seed = 0;
  int max_episodes = 0, max_seasons = 0;
  train->add_option("--algo", algo, "Algorithm: ddpg or ppo")
      ->check(CLI::IsMember({"ddpg", "ppo"}));
  train->add_option("--method", method, "PPO variant: clip or penalty")
      ->check(CLI::IsMember({"clip", "penalty"}));
  auto* seed_opt = train->add_option("--seed", seed, "Random seed");
  train->add_option("--config", config_path, "Flat key = value config file");
  train->add_option("--out", out_dir,
                    "Output directory (log.csv, config.echo, checkpoint.final)");
  train->add_option("--max-episodes", max_episodes, "DDPG episode budget");
  train->add_option("--max-seasons", max_seasons, "PPO season budget");

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "Greedy rollouts from a checkpoint");
  std::string checkpoint;
  int episodes = 10;
  long long eval_seed = 0;
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint file")
      ->required();
  evaluate->add_option("--episodes", episodes, "Number of episodes");
  evaluate->add_option("--seed", eval_seed, "Random seed for resets");

  // inspect
  auto* inspect =
      app.add_subcommand("inspect", "Print checkpoint metadata");
  std::string inspect_path;
  inspect->add_option("--checkpoint", inspect_path, "Checkpoint file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*train) {
      return run_train(algo, method, config_path, out_dir, seed,
                       seed_opt->count() > 0, max_episodes, max_seasons);
    }
    if (*evaluate) return run_evaluate(checkpoint, episodes, eval_seed);
    if (*inspect) return run_inspect(inspect_path);
  } catch (const swingup::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
