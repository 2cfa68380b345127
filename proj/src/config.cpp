#include "swingup/config.hpp"

#include <fstream>
#include <sstream>

namespace swingup {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config: bad numeric value for '" + key + "': " + value);
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config: bad integer value for '" + key + "': " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw UsageError("config: bad boolean value for '" + key + "': " + value);
}

}  // namespace

std::string to_string(Algo algo) {
  return algo == Algo::kDdpg ? "ddpg" : "ppo";
}

std::string to_string(PpoMethod method) {
  return method == PpoMethod::kClip ? "clip" : "penalty";
}

std::string to_string(NoiseKind noise) {
  return noise == NoiseKind::kOrnsteinUhlenbeck ? "ou" : "gaussian";
}

void apply_key(TrainConfig& cfg, const std::string& key,
               const std::string& value) {
  if (key == "algo") {
    if (value == "ddpg") cfg.algo = Algo::kDdpg;
    else if (value == "ppo") cfg.algo = Algo::kPpo;
    else throw UsageError("config: algo must be 'ddpg' or 'ppo', got " + value);
  } else if (key == "method") {
    if (value == "clip") cfg.method = PpoMethod::kClip;
    else if (value == "penalty") cfg.method = PpoMethod::kPenalty;
    else throw UsageError("config: method must be 'clip' or 'penalty', got " +
                          value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "max_episodes") {
    cfg.max_episodes = static_cast<int>(parse_int(key, value));
  } else if (key == "max_seasons") {
    cfg.max_seasons = static_cast<int>(parse_int(key, value));
  } else if (key == "solve_threshold") {
    cfg.solve_threshold = parse_double(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "ddpg_actor_lr") {
    cfg.ddpg_actor_lr = parse_double(key, value);
  } else if (key == "ddpg_critic_lr") {
    cfg.ddpg_critic_lr = parse_double(key, value);
  } else if (key == "ddpg_gamma") {
    cfg.ddpg_gamma = parse_double(key, value);
  } else if (key == "tau") {
    cfg.tau = parse_double(key, value);
  } else if (key == "ddpg_batch_size") {
    cfg.ddpg_batch_size = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "replay_capacity") {
    cfg.replay_capacity = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "updates_per_step") {
    cfg.updates_per_step = static_cast<int>(parse_int(key, value));
  } else if (key == "noise") {
    if (value == "ou") cfg.noise = NoiseKind::kOrnsteinUhlenbeck;
    else if (value == "gaussian") cfg.noise = NoiseKind::kGaussian;
    else throw UsageError("config: noise must be 'ou' or 'gaussian', got " +
                          value);
  } else if (key == "solve_patience") {
    cfg.solve_patience = static_cast<int>(parse_int(key, value));
  } else if (key == "ppo_actor_lr") {
    cfg.ppo_actor_lr = parse_double(key, value);
  } else if (key == "ppo_critic_lr") {
    cfg.ppo_critic_lr = parse_double(key, value);
  } else if (key == "ppo_gamma") {
    cfg.ppo_gamma = parse_double(key, value);
  } else if (key == "gae_lambda") {
    cfg.gae_lambda = parse_double(key, value);
  } else if (key == "clip_epsilon") {
    cfg.clip_epsilon = parse_double(key, value);
  } else if (key == "kl_beta") {
    cfg.kl_beta = parse_double(key, value);
  } else if (key == "kl_target") {
    cfg.kl_target = parse_double(key, value);
  } else if (key == "entropy_coeff") {
    cfg.entropy_coeff = parse_double(key, value);
  } else if (key == "train_epochs") {
    cfg.train_epochs = static_cast<int>(parse_int(key, value));
  } else if (key == "ppo_batch_size") {
    cfg.ppo_batch_size = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "rollout_size") {
    cfg.rollout_size = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "normalize_adv") {
    cfg.normalize_adv = parse_bool(key, value);
  } else if (key == "bootstrap_truncation") {
    cfg.bootstrap_truncation = parse_bool(key, value);
  } else {
    throw UsageError("config: unknown key '" + key + "'");
  }
}

TrainConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("config: cannot open file: " + path);
  }
  TrainConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config: line " + std::to_string(line_no) +
                       " is not 'key = value': " + stripped);
    }
    apply_key(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return cfg;
}

std::string config_to_text(const TrainConfig& cfg) {
  std::ostringstream out;
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return std::string(buf);
  };
  out << "algo = " << to_string(cfg.algo) << "\n";
  out << "method = " << to_string(cfg.method) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "max_episodes = " << cfg.max_episodes << "\n";
  out << "max_seasons = " << cfg.max_seasons << "\n";
  out << "solve_threshold = " << num(cfg.solve_threshold) << "\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  out << "ddpg_actor_lr = " << num(cfg.ddpg_actor_lr) << "\n";
  out << "ddpg_critic_lr = " << num(cfg.ddpg_critic_lr) << "\n";
  out << "ddpg_gamma = " << num(cfg.ddpg_gamma) << "\n";
  out << "tau = " << num(cfg.tau) << "\n";
  out << "ddpg_batch_size = " << cfg.ddpg_batch_size << "\n";
  out << "replay_capacity = " << cfg.replay_capacity << "\n";
  out << "updates_per_step = " << cfg.updates_per_step << "\n";
  out << "noise = " << to_string(cfg.noise) << "\n";
  out << "solve_patience = " << cfg.solve_patience << "\n";
  out << "ppo_actor_lr = " << num(cfg.ppo_actor_lr) << "\n";
  out << "ppo_critic_lr = " << num(cfg.ppo_critic_lr) << "\n";
  out << "ppo_gamma = " << num(cfg.ppo_gamma) << "\n";
  out << "gae_lambda = " << num(cfg.gae_lambda) << "\n";
  out << "clip_epsilon = " << num(cfg.clip_epsilon) << "\n";
  out << "kl_beta = " << num(cfg.kl_beta) << "\n";
  out << "kl_target = " << num(cfg.kl_target) << "\n";
  out << "entropy_coeff = " << num(cfg.entropy_coeff) << "\n";
  out << "train_epochs = " << cfg.train_epochs << "\n";
  out << "ppo_batch_size = " << cfg.ppo_batch_size << "\n";
  out << "rollout_size = " << cfg.rollout_size << "\n";
  out << "normalize_adv = " << (cfg.normalize_adv ? "true" : "false") << "\n";
  out << "bootstrap_truncation = "
      << (cfg.bootstrap_truncation ? "true" : "false") << "\n";
  return out.str();
}

DdpgConfig make_ddpg_config(const TrainConfig& cfg) {
  DdpgConfig out;
  out.actor_lr = cfg.ddpg_actor_lr;
  out.critic_lr = cfg.ddpg_critic_lr;
  out.gamma = cfg.ddpg_gamma;
  out.tau = cfg.tau;
  out.batch_size = cfg.ddpg_batch_size;
  out.noise = cfg.noise;
  return out;
}

PpoConfig make_ppo_config(const TrainConfig& cfg) {
  PpoConfig out;
  out.method = cfg.method;
  out.actor_lr = cfg.ppo_actor_lr;
  out.critic_lr = cfg.ppo_critic_lr;
  out.clip_epsilon = cfg.clip_epsilon;
  out.beta = cfg.kl_beta;
  out.kl_target = cfg.kl_target;
  out.epochs = cfg.train_epochs;
  out.batch_size = cfg.ppo_batch_size;
  out.entropy_coeff = cfg.entropy_coeff;
  out.normalize_adv = cfg.normalize_adv;
  return out;
}

}  // namespace swingup
