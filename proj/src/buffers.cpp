#include "swingup/buffers.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace swingup {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) {
    throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  }
  ring_.reserve(capacity_);
}

void ReplayBuffer::add(Transition t) {
  if (ring_.size() < capacity_) {
    ring_.push_back(std::move(t));
  } else {
    ring_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch,
                                             Rng& rng) const {
  if (size() < batch) {
    throw std::runtime_error("ReplayBuffer::sample: not enough data");
  }
  std::vector<Transition> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    out.push_back(ring_[rng.index(ring_.size())]);
  }
  return out;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= ring_.size()) {
    throw std::out_of_range("ReplayBuffer::at: index out of range");
  }
  const std::size_t oldest = ring_.size() < capacity_ ? 0 : head_;
  return ring_[(oldest + i) % ring_.size()];
}

std::vector<double> discount_cumsum(const std::vector<double>& x,
                                    double gamma) {
  std::vector<double> y(x.size());
  double acc = 0.0;
  for (std::size_t i = x.size(); i-- > 0;) {
    acc = x[i] + gamma * acc;
    y[i] = acc;
  }
  return y;
}

RolloutBuffer::RolloutBuffer(std::size_t max_size, double gamma, double lambda)
    : max_size_(max_size), gamma_(gamma), lambda_(lambda) {
  if (max_size_ == 0) {
    throw std::invalid_argument("RolloutBuffer: max_size must be positive");
  }
}

void RolloutBuffer::add(const Vec& obs, const Vec& action, double reward,
                        double value, double logp) {
  if (full()) {
    throw std::runtime_error("RolloutBuffer::add: buffer full");
  }
  obs_.push_back(obs);
  actions_.push_back(action);
  rewards_.push_back(reward);
  values_.push_back(value);
  logps_.push_back(logp);
  advantages_.push_back(0.0);
  returns_.push_back(0.0);
}

void RolloutBuffer::finish_path(double last_value) {
  const std::size_t start = path_start_;
  const std::size_t end = size();
  if (start >= end) {
    throw std::runtime_error("RolloutBuffer::finish_path: no open segment");
  }
  const std::size_t n = end - start;

  std::vector<double> deltas(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double v_next = t + 1 < n ? values_[start + t + 1] : last_value;
    deltas[t] = rewards_[start + t] + gamma_ * v_next - values_[start + t];
  }
  const std::vector<double> adv = discount_cumsum(deltas, gamma_ * lambda_);

  std::vector<double> rewards_boot(n + 1);
  for (std::size_t t = 0; t < n; ++t) rewards_boot[t] = rewards_[start + t];
  rewards_boot[n] = last_value;
  const std::vector<double> ret = discount_cumsum(rewards_boot, gamma_);

  for (std::size_t t = 0; t < n; ++t) {
    advantages_[start + t] = adv[t];
    returns_[start + t] = ret[t];
  }
  path_start_ = end;
}

void RolloutBuffer::clear() {
  obs_.clear();
  actions_.clear();
  rewards_.clear();
  values_.clear();
  logps_.clear();
  advantages_.clear();
  returns_.clear();
  path_start_ = 0;
  normalized_ = false;
}

std::vector<std::vector<int>> RolloutBuffer::minibatch_indices(
    std::size_t batch, Rng& rng, bool normalize_adv) {
  if (!sealed()) {
    throw std::runtime_error(
        "RolloutBuffer::minibatch_indices: buffer empty or not sealed");
  }
  if (batch == 0) {
    throw std::invalid_argument("RolloutBuffer::minibatch_indices: batch == 0");
  }
  const std::size_t n = size();

  if (normalize_adv && !normalized_) {
    double mean = 0.0;
    for (double a : advantages_) mean += a;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double a : advantages_) var += (a - mean) * (a - mean);
    var /= static_cast<double>(n);
    const double denom = std::sqrt(var) + 1e-8;
    for (double& a : advantages_) a = (a - mean) / denom;
    normalized_ = true;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<std::vector<int>> batches;
  for (std::size_t begin = 0; begin < n; begin += batch) {
    const std::size_t end = std::min(begin + batch, n);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(begin),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

}  // namespace swingup
