#include "swingup/run_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace swingup {

namespace {

constexpr const char* kDdpgHeader = "episode,total_reward,avg40_reward";
constexpr const char* kPpoHeader =
    "season,season_score,actor_loss,critic_loss,mean_kl,beta";

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

void write_log(const RunLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_log: cannot open " + path);
  }
  if (log.algo == Algo::kDdpg) {
    out << kDdpgHeader << "\n";
    for (const auto& row : log.ddpg_rows) {
      out << row.episode << ',' << fmt(row.total_reward) << ','
          << fmt(row.avg40_reward) << "\n";
    }
  } else {
    out << kPpoHeader << "\n";
    for (const auto& row : log.ppo_rows) {
      out << row.season << ',' << fmt(row.season_score) << ','
          << fmt(row.actor_loss) << ',' << fmt(row.critic_loss) << ','
          << fmt(row.mean_kl) << ',' << fmt(row.beta) << "\n";
    }
  }
  if (!out) {
    throw std::runtime_error("write_log: write failed for " + path);
  }
}

RunLog read_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_log: cannot open " + path);
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("read_log: empty file: " + path);
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();

  RunLog log;
  if (header == kDdpgHeader) {
    log.algo = Algo::kDdpg;
  } else if (header == kPpoHeader) {
    log.algo = Algo::kPpo;
  } else {
    throw std::runtime_error("read_log: unrecognized header in " + path);
  }

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (log.algo == Algo::kDdpg) {
      if (fields.size() != 3) {
        throw std::runtime_error("read_log: malformed row in " + path);
      }
      log.ddpg_rows.push_back({std::stoi(fields[0]), std::stod(fields[1]),
                               std::stod(fields[2])});
    } else {
      if (fields.size() != 6) {
        throw std::runtime_error("read_log: malformed row in " + path);
      }
      log.ppo_rows.push_back({std::stoi(fields[0]), std::stod(fields[1]),
                              std::stod(fields[2]), std::stod(fields[3]),
                              std::stod(fields[4]), std::stod(fields[5])});
    }
  }
  return log;
}

}  // namespace swingup
