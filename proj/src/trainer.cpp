#include "swingup/trainer.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "swingup/pendulum_env.hpp"

namespace swingup {

namespace {

double trailing_mean(const std::vector<double>& v, std::size_t window) {
  const std::size_t n = std::min(v.size(), window);
  double sum = 0.0;
  for (std::size_t i = v.size() - n; i < v.size(); ++i) sum += v[i];
  return sum / static_cast<double>(n);
}

void write_run_outputs(const TrainConfig& cfg, const RunLog& log) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw std::runtime_error("trainer: cannot create output dir " +
                             cfg.output_dir + ": " + ec.message());
  }
  write_log(log, (fs::path(cfg.output_dir) / "log.csv").string());
  const std::string echo_path =
      (fs::path(cfg.output_dir) / "config.echo").string();
  std::ofstream echo(echo_path);
  if (!echo) {
    throw std::runtime_error("trainer: cannot write " + echo_path);
  }
  echo << config_to_text(cfg);
}

}  // namespace

std::optional<int> first_solve_episode(const std::vector<double>& rewards,
                                       double threshold, int window,
                                       int patience) {
  int consecutive = 0;
  std::vector<double> seen;
  seen.reserve(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    seen.push_back(rewards[i]);
    if (trailing_mean(seen, static_cast<std::size_t>(window)) > threshold) {
      if (++consecutive >= patience) return static_cast<int>(i);
    } else {
      consecutive = 0;
    }
  }
  return std::nullopt;
}

DdpgRunResult run_ddpg(const TrainConfig& cfg) {
  Rng rng(cfg.seed);
  PendulumEnv env;
  auto agent = std::make_unique<DdpgAgent>(make_ddpg_config(cfg), rng);
  ReplayBuffer buf(cfg.replay_capacity);

  DdpgRunResult result;
  result.log.algo = Algo::kDdpg;
  std::vector<double> totals;
  int consecutive = 0;

  for (int episode = 1; episode <= cfg.max_episodes; ++episode) {
    Observation obs = env.reset(rng);
    agent->reset_noise();
    double total = 0.0;
    for (int t = 0; t < env.params().episode_len; ++t) {
      const Vec s = obs.vec();
      const double action = agent->act(s, /*explore=*/true, rng);
      const StepResult sr = env.step(action);
      total += sr.reward;
      buf.add({s, Vec::Constant(1, action), sr.reward, sr.obs.vec(),
               sr.done ? 1.0 : 0.0});
      if (buf.size() >= cfg.ddpg_batch_size) {
        for (int u = 0; u < cfg.updates_per_step; ++u) {
          agent->train_step(buf, rng);
        }
      }
      obs = sr.obs;
    }
    totals.push_back(total);
    const double avg40 = trailing_mean(totals, 40);
    result.log.ddpg_rows.push_back({episode, total, avg40});
    result.episodes_run = episode;

    if (avg40 > cfg.solve_threshold) {
      if (++consecutive >= cfg.solve_patience) {
        result.solved = true;
        break;
      }
    } else {
      consecutive = 0;
    }
  }

  result.replay_size = buf.size();
  if (!cfg.output_dir.empty()) {
    write_run_outputs(cfg, result.log);
    save_checkpoint(*agent, cfg,
                    (std::filesystem::path(cfg.output_dir) / "checkpoint.final")
                        .string());
  }
  result.agent = std::move(agent);
  return result;
}

PpoRunResult run_ppo(const TrainConfig& cfg) {
  Rng rng(cfg.seed);
  PendulumEnv env;
  auto agent = std::make_unique<PpoAgent>(make_ppo_config(cfg), rng);
  RolloutBuffer buf(cfg.rollout_size, cfg.ppo_gamma, cfg.gae_lambda);

  PpoRunResult result;
  result.log.algo = Algo::kPpo;

  for (int season = 1; season <= cfg.max_seasons; ++season) {
    std::vector<double> episode_scores;
    Observation obs = env.reset(rng);
    double episode_total = 0.0;
    for (std::size_t t = 0; t < cfg.rollout_size; ++t) {
      const Vec s = obs.vec();
      const PolicySample ps = agent->act(s, rng);
      const double exec =
          std::clamp(ps.action[0], -agent->config().max_action,
                     agent->config().max_action);
      const StepResult sr = env.step(exec);
      buf.add(s, ps.action, sr.reward, ps.value, ps.logp);
      episode_total += sr.reward;
      if (sr.done) {
        const double last_v =
            cfg.bootstrap_truncation ? agent->value(sr.obs.vec()) : 0.0;
        buf.finish_path(last_v);
        episode_scores.push_back(episode_total);
        episode_total = 0.0;
        ++result.total_episodes;
        if (t + 1 < cfg.rollout_size) obs = env.reset(rng);
      } else {
        obs = sr.obs;
      }
    }
    if (!buf.sealed()) {
      // rollout_size cut an episode short; bootstrap the partial segment
      buf.finish_path(agent->value(obs.vec()));
      if (episode_scores.empty()) episode_scores.push_back(episode_total);
    }

    double season_score = 0.0;
    for (double e : episode_scores) season_score += e;
    season_score /= static_cast<double>(episode_scores.size());

    const PpoTrainStats stats = agent->train(buf, rng);
    buf.clear();

    result.log.ppo_rows.push_back({season, season_score, stats.actor_loss,
                                   stats.critic_loss, stats.mean_kl,
                                   stats.beta_after});
    result.seasons_run = season;
    if (season_score > cfg.solve_threshold) {
      result.solved = true;
      break;
    }
  }

  result.buffer_size_after = buf.size();
  if (!cfg.output_dir.empty()) {
    write_run_outputs(cfg, result.log);
    save_checkpoint(*agent, cfg,
                    (std::filesystem::path(cfg.output_dir) / "checkpoint.final")
                        .string());
  }
  result.agent = std::move(agent);
  return result;
}

double evaluate_checkpoint(const std::string& checkpoint_path, int episodes,
                           std::uint64_t seed) {
  if (episodes <= 0) {
    throw std::invalid_argument("evaluate: episodes must be positive");
  }
  const Algo algo = checkpoint_algo(checkpoint_path);
  Rng rng(seed);
  PendulumEnv env;
  double sum = 0.0;

  if (algo == Algo::kDdpg) {
    DdpgAgent agent = load_ddpg_checkpoint(checkpoint_path);
    for (int e = 0; e < episodes; ++e) {
      Observation obs = env.reset(rng);
      for (int t = 0; t < env.params().episode_len; ++t) {
        const StepResult sr =
            env.step(agent.act(obs.vec(), /*explore=*/false, rng));
        sum += sr.reward;
        obs = sr.obs;
      }
    }
  } else {
    PpoAgent agent = load_ppo_checkpoint(checkpoint_path);
    for (int e = 0; e < episodes; ++e) {
      Observation obs = env.reset(rng);
      for (int t = 0; t < env.params().episode_len; ++t) {
        const StepResult sr = env.step(agent.greedy_action(obs.vec()));
        sum += sr.reward;
        obs = sr.obs;
      }
    }
  }
  return sum / static_cast<double>(episodes);
}

}  // namespace swingup
