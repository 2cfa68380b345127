#include "swingup/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace swingup {

namespace {

constexpr const char* kMagic = "swingup-checkpoint v1";

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kLinear: return "linear";
    case Activation::kScaledTanh: return "scaled_tanh";
  }
  return "?";
}

Activation activation_from(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "linear") return Activation::kLinear;
  if (name == "scaled_tanh") return Activation::kScaledTanh;
  throw std::runtime_error("checkpoint: unknown activation '" + name + "'");
}

void write_net(std::ostream& out, const std::string& name, const Mlp& net) {
  out << "[net " << name << "]\n";
  out << "dims =";
  for (int d : net.layer_dims()) out << ' ' << d;
  out << "\n";
  out << "hidden = " << activation_name(net.hidden_activation()) << "\n";
  out << "output = " << activation_name(net.output_activation()) << ' '
      << fmt17(net.output_bound()) << "\n";
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    out << "layer " << l << " weights =";
    const Mat& w = net.weight(l);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) out << ' ' << fmt17(w(r, c));
    }
    out << "\n";
    out << "layer " << l << " bias =";
    for (Eigen::Index i = 0; i < net.bias(l).size(); ++i) {
      out << ' ' << fmt17(net.bias(l)[i]);
    }
    out << "\n";
  }
}

void write_vec(std::ostream& out, const std::string& name, const Vec& v) {
  out << "[vec " << name << "]\n";
  out << "size = " << v.size() << "\n";
  out << "values =";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << fmt17(v[i]);
  out << "\n";
}

// Raw document: preamble key/values plus ordered (section, lines) blocks.
struct Document {
  std::map<std::string, std::string> preamble;
  std::vector<std::pair<std::string, std::vector<std::string>>> sections;
};

Document parse_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("checkpoint: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw std::runtime_error("checkpoint: bad or missing magic line in " +
                             path);
  }
  Document doc;
  bool in_preamble = true;
  bool saw_end = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "[end]") {
      saw_end = true;
      break;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::runtime_error("checkpoint: malformed section header: " +
                                 line);
      }
      doc.sections.emplace_back(line.substr(1, line.size() - 2),
                                std::vector<std::string>{});
      in_preamble = false;
      continue;
    }
    if (in_preamble) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("checkpoint: malformed preamble line: " +
                                 line);
      }
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? "" : s.substr(b, e - b + 1);
      };
      doc.preamble[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    } else {
      doc.sections.back().second.push_back(line);
    }
  }
  if (!saw_end) {
    throw std::runtime_error("checkpoint: truncated file (missing [end]): " +
                             path);
  }
  return doc;
}

// "key = v0 v1 v2 ..." -> values; throws unless the key matches.
std::vector<double> parse_values(const std::string& line,
                                 const std::string& key) {
  const auto eq = line.find('=');
  if (eq == std::string::npos ||
      line.substr(0, eq).find(key) == std::string::npos) {
    throw std::runtime_error("checkpoint: expected '" + key + "' line, got: " +
                             line.substr(0, 40));
  }
  std::istringstream ss(line.substr(eq + 1));
  std::vector<double> out;
  double v;
  while (ss >> v) out.push_back(v);
  return out;
}

Mlp parse_net(const std::vector<std::string>& lines) {
  if (lines.size() < 3) {
    throw std::runtime_error("checkpoint: truncated network section");
  }
  const auto dims_d = parse_values(lines[0], "dims");
  std::vector<int> dims(dims_d.size());
  for (std::size_t i = 0; i < dims_d.size(); ++i) {
    dims[i] = static_cast<int>(dims_d[i]);
  }
  if (dims.size() < 2) {
    throw std::runtime_error("checkpoint: network needs at least two dims");
  }

  auto word_after = [](const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("checkpoint: malformed line: " + line);
    }
    std::istringstream ss(line.substr(eq + 1));
    std::string w;
    ss >> w;
    return std::make_pair(w, std::string(line.substr(eq + 1)));
  };
  MlpInit init;
  init.hidden = activation_from(word_after(lines[1]).first);
  {
    std::istringstream ss(word_after(lines[2]).second);
    std::string name;
    ss >> name;
    init.output = activation_from(name);
    if (!(ss >> init.output_bound)) {
      throw std::runtime_error("checkpoint: output activation missing bound");
    }
  }

  const std::size_t layers = dims.size() - 1;
  if (lines.size() != 3 + 2 * layers) {
    throw std::runtime_error("checkpoint: wrong number of parameter lines");
  }
  std::vector<Mat> weights;
  std::vector<Vec> biases;
  for (std::size_t l = 0; l < layers; ++l) {
    const auto wv = parse_values(lines[3 + 2 * l], "weights");
    const auto bv = parse_values(lines[4 + 2 * l], "bias");
    const std::size_t rows = static_cast<std::size_t>(dims[l + 1]);
    const std::size_t cols = static_cast<std::size_t>(dims[l]);
    if (wv.size() != rows * cols || bv.size() != rows) {
      throw std::runtime_error("checkpoint: parameter count mismatch");
    }
    Mat w(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) w(r, c) = wv[r * cols + c];
    }
    Vec b(rows);
    for (std::size_t r = 0; r < rows; ++r) b[r] = bv[r];
    weights.push_back(std::move(w));
    biases.push_back(std::move(b));
  }
  return Mlp(std::move(dims), init, std::move(weights), std::move(biases));
}

Vec parse_vec(const std::vector<std::string>& lines) {
  if (lines.size() != 2) {
    throw std::runtime_error("checkpoint: malformed vector section");
  }
  const auto size = parse_values(lines[0], "size");
  const auto values = parse_values(lines[1], "values");
  if (size.size() != 1 ||
      values.size() != static_cast<std::size_t>(size[0])) {
    throw std::runtime_error("checkpoint: vector size mismatch");
  }
  Vec v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  return v;
}

TrainConfig parse_config_section(const std::vector<std::string>& lines) {
  TrainConfig cfg;
  for (const auto& line : lines) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("checkpoint: malformed config line: " + line);
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? "" : s.substr(b, e - b + 1);
    };
    try {
      apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const UsageError& e) {
      throw std::runtime_error(std::string("checkpoint: ") + e.what());
    }
  }
  return cfg;
}

const std::vector<std::string>& find_section(const Document& doc,
                                             const std::string& name) {
  for (const auto& [sec, lines] : doc.sections) {
    if (sec == name) return lines;
  }
  throw std::runtime_error("checkpoint: missing section [" + name + "]");
}

void check_dims(const Mlp& net, const std::vector<int>& expect,
                const std::string& name) {
  if (net.layer_dims() != expect) {
    throw std::runtime_error("checkpoint: dim mismatch in network " + name);
  }
}

}  // namespace

void save_checkpoint(const DdpgAgent& agent, const TrainConfig& cfg,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("checkpoint: cannot open for write: " + path);
  }
  out << kMagic << "\n";
  out << "algo = ddpg\n";
  out << "[config]\n" << config_to_text(cfg);
  write_net(out, "actor", agent.actor());
  write_net(out, "critic", agent.critic());
  write_net(out, "actor_target", agent.actor_target());
  write_net(out, "critic_target", agent.critic_target());
  out << "[end]\n";
  if (!out) {
    throw std::runtime_error("checkpoint: write failed for " + path);
  }
}

void save_checkpoint(const PpoAgent& agent, const TrainConfig& cfg,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("checkpoint: cannot open for write: " + path);
  }
  out << kMagic << "\n";
  out << "algo = ppo\n";
  out << "method = " << to_string(agent.config().method) << "\n";
  out << "beta = " << fmt17(agent.beta()) << "\n";
  out << "[config]\n" << config_to_text(cfg);
  write_net(out, "actor_mean", agent.actor_mean());
  write_vec(out, "log_std_raw", agent.raw_std());
  write_net(out, "critic", agent.critic());
  out << "[end]\n";
  if (!out) {
    throw std::runtime_error("checkpoint: write failed for " + path);
  }
}

Algo checkpoint_algo(const std::string& path) {
  const Document doc = parse_document(path);
  const auto it = doc.preamble.find("algo");
  if (it == doc.preamble.end()) {
    throw std::runtime_error("checkpoint: missing algo tag in " + path);
  }
  if (it->second == "ddpg") return Algo::kDdpg;
  if (it->second == "ppo") return Algo::kPpo;
  throw std::runtime_error("checkpoint: unknown algo tag '" + it->second +
                           "' in " + path);
}

DdpgAgent load_ddpg_checkpoint(const std::string& path, TrainConfig* cfg_out) {
  const Document doc = parse_document(path);
  const auto algo = doc.preamble.find("algo");
  if (algo == doc.preamble.end() || algo->second != "ddpg") {
    throw std::runtime_error("checkpoint: not a ddpg checkpoint: " + path);
  }
  const TrainConfig cfg = parse_config_section(find_section(doc, "config"));

  Rng init_rng(cfg.seed);
  DdpgAgent agent(make_ddpg_config(cfg), init_rng);
  Mlp actor = parse_net(find_section(doc, "net actor"));
  Mlp critic = parse_net(find_section(doc, "net critic"));
  Mlp actor_target = parse_net(find_section(doc, "net actor_target"));
  Mlp critic_target = parse_net(find_section(doc, "net critic_target"));
  check_dims(actor, agent.actor().layer_dims(), "actor");
  check_dims(critic, agent.critic().layer_dims(), "critic");
  check_dims(actor_target, agent.actor().layer_dims(), "actor_target");
  check_dims(critic_target, agent.critic().layer_dims(), "critic_target");
  agent.actor() = std::move(actor);
  agent.critic() = std::move(critic);
  agent.actor_target() = std::move(actor_target);
  agent.critic_target() = std::move(critic_target);
  if (cfg_out) *cfg_out = cfg;
  return agent;
}

PpoAgent load_ppo_checkpoint(const std::string& path, TrainConfig* cfg_out) {
  const Document doc = parse_document(path);
  const auto algo = doc.preamble.find("algo");
  if (algo == doc.preamble.end() || algo->second != "ppo") {
    throw std::runtime_error("checkpoint: not a ppo checkpoint: " + path);
  }
  const TrainConfig cfg = parse_config_section(find_section(doc, "config"));

  Rng init_rng(cfg.seed);
  PpoAgent agent(make_ppo_config(cfg), init_rng);
  Mlp actor_mean = parse_net(find_section(doc, "net actor_mean"));
  Mlp critic = parse_net(find_section(doc, "net critic"));
  Vec raw_std = parse_vec(find_section(doc, "vec log_std_raw"));
  check_dims(actor_mean, agent.actor_mean().layer_dims(), "actor_mean");
  check_dims(critic, agent.critic().layer_dims(), "critic");
  if (raw_std.size() != agent.raw_std().size()) {
    throw std::runtime_error("checkpoint: log_std_raw size mismatch");
  }
  agent.actor_mean() = std::move(actor_mean);
  agent.critic() = std::move(critic);
  agent.raw_std() = std::move(raw_std);
  const auto beta = doc.preamble.find("beta");
  if (beta == doc.preamble.end()) {
    throw std::runtime_error("checkpoint: missing beta in " + path);
  }
  agent.set_beta(std::stod(beta->second));
  if (cfg_out) *cfg_out = cfg;
  return agent;
}

CheckpointInfo inspect_checkpoint(const std::string& path) {
  const Document doc = parse_document(path);
  CheckpointInfo info;
  info.algo = checkpoint_algo(path);
  info.config = parse_config_section(find_section(doc, "config"));
  for (const auto& [sec, lines] : doc.sections) {
    if (sec.rfind("net ", 0) == 0) {
      const Mlp net = parse_net(lines);
      info.nets.emplace_back(sec.substr(4), net.layer_dims());
      info.parameter_count += net.parameter_count();
    } else if (sec.rfind("vec ", 0) == 0) {
      const Vec v = parse_vec(lines);
      info.nets.emplace_back(sec.substr(4),
                             std::vector<int>{static_cast<int>(v.size())});
      info.parameter_count += static_cast<std::size_t>(v.size());
    }
  }
  const auto beta = doc.preamble.find("beta");
  if (beta != doc.preamble.end()) info.beta = std::stod(beta->second);
  return info;
}

}  // namespace swingup
