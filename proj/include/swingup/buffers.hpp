#pragma once

#include <cstddef>
#include <vector>

#include "swingup/rng.hpp"
#include "swingup/types.hpp"

namespace swingup {

/// One environment interaction: (s, a, r, s', d). d is 1.0 on the step that
/// ended the episode (time-limit truncation), else 0.0.
struct Transition {
  Vec s;
  Vec a;
  double r = 0.0;
  Vec s_next;
  double d = 0.0;
};

/// FIFO ring of transitions for off-policy training. Once full, each insert
/// overwrites the oldest entry.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 20000);

  void add(Transition t);

  /// Batch drawn uniformly WITH replacement. Throws when size() < batch.
  std::vector<Transition> sample(std::size_t batch, Rng& rng) const;

  std::size_t size() const { return ring_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// Entry in insertion order: at(0) is the oldest stored transition.
  const Transition& at(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::vector<Transition> ring_;
  std::size_t head_ = 0;  // next write position once full
};

/// y_t = sum_{l>=0} gamma^l x_{t+l}, by backward recursion.
std::vector<double> discount_cumsum(const std::vector<double>& x, double gamma);

/// On-policy trajectory store. Steps are appended with the value estimate
/// and log-probability recorded at collection time; finish_path() seals an
/// episode segment by computing GAE advantages and discounted rewards-to-go
/// against a bootstrap value for the state after the segment.
class RolloutBuffer {
 public:
  RolloutBuffer(std::size_t max_size, double gamma, double lambda);

  void add(const Vec& obs, const Vec& action, double reward, double value,
           double logp);

  /// Seals the open segment. delta_t = r_t + gamma*V(s_{t+1}) - V(s_t) with
  /// V after the segment = last_value; adv = discount_cumsum(delta,
  /// gamma*lambda); ret = discount_cumsum(r ++ [last_value], gamma) truncated
  /// to the segment. Throws when no segment is open.
  void finish_path(double last_value);

  void clear();

  /// A fresh random permutation of all indices, chunked into batches (last
  /// chunk may be short). On the first call after sealing, advantages are
  /// normalized in place to zero mean / unit std over the whole buffer
  /// (population std) unless normalize_adv is false. Throws when the buffer
  /// is empty or has unsealed steps.
  std::vector<std::vector<int>> minibatch_indices(std::size_t batch, Rng& rng,
                                                  bool normalize_adv = true);

  std::size_t size() const { return rewards_.size(); }
  std::size_t max_size() const { return max_size_; }
  bool full() const { return size() >= max_size_; }
  /// True when every stored step belongs to a finished path.
  bool sealed() const { return !rewards_.empty() && path_start_ == size(); }

  const Vec& obs(std::size_t i) const { return obs_[i]; }
  const Vec& action(std::size_t i) const { return actions_[i]; }
  double reward(std::size_t i) const { return rewards_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  double logp(std::size_t i) const { return logps_[i]; }
  double advantage(std::size_t i) const { return advantages_[i]; }
  double ret(std::size_t i) const { return returns_[i]; }

  double gamma() const { return gamma_; }
  double lambda() const { return lambda_; }

 private:
  std::size_t max_size_;
  double gamma_;
  double lambda_;
  std::vector<Vec> obs_;
  std::vector<Vec> actions_;
  std::vector<double> rewards_;
  std::vector<double> values_;
  std::vector<double> logps_;
  std::vector<double> advantages_;
  std::vector<double> returns_;
  std::size_t path_start_ = 0;
  bool normalized_ = false;
};

}  // namespace swingup
