#include "swingup/ddpg_agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swingup {

OuNoise::OuNoise(int dim, OuNoiseConfig cfg)
    : cfg_(cfg), state_(Vec::Zero(dim)) {}

void OuNoise::reset() { state_.setZero(); }

const Vec& OuNoise::step(Rng& rng) {
  const double scale = cfg_.sigma * std::sqrt(cfg_.dt);
  for (Eigen::Index i = 0; i < state_.size(); ++i) {
    state_[i] += cfg_.theta * (cfg_.mean - state_[i]) * cfg_.dt +
                 scale * rng.normal();
  }
  return state_;
}

DdpgAgent::DdpgAgent(DdpgConfig cfg, Rng& rng)
    : cfg_(cfg),
      actor_({3, 128, 64, 64, 1},
             {Activation::kRelu, Activation::kScaledTanh, cfg.max_action,
              /*final_layer_limit=*/3e-3},
             rng),
      critic_({4, 64, 64, 64, 1},
              {Activation::kRelu, Activation::kLinear, 1.0, 0.0}, rng),
      actor_target_(actor_),
      critic_target_(critic_),
      actor_opt_(actor_, {cfg.actor_lr}),
      critic_opt_(critic_, {cfg.critic_lr}),
      noise_(1, cfg.ou) {}

Vec DdpgAgent::critic_input(const Vec& obs, double action) const {
  Vec in(obs.size() + 1);
  in.head(obs.size()) = obs;
  in[obs.size()] = action;
  return in;
}

double DdpgAgent::act(const Vec& obs, bool explore, Rng& rng) {
  double a = actor_.forward(obs)[0];
  if (explore) {
    if (cfg_.noise == NoiseKind::kOrnsteinUhlenbeck) {
      a += noise_.step(rng)[0];
    } else {
      a += cfg_.gaussian_noise_std * rng.normal();
    }
  }
  return std::clamp(a, -cfg_.max_action, cfg_.max_action);
}

std::vector<double> DdpgAgent::compute_targets(
    const std::vector<Transition>& batch) const {
  std::vector<double> y(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& t = batch[i];
    const double a_next = actor_target_.forward(t.s_next)[0];
    const double q_next =
        critic_target_.forward(critic_input(t.s_next, a_next))[0];
    y[i] = t.r + cfg_.gamma * (1.0 - t.d) * q_next;
  }
  return y;
}

double DdpgAgent::critic_step(const std::vector<Transition>& batch) {
  if (batch.empty()) {
    throw std::invalid_argument("DdpgAgent::critic_step: empty batch");
  }
  const std::vector<double> targets = compute_targets(batch);
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  double loss = 0.0;
  GradientTape tape;
  MlpGradients sample_grad;
  Vec out_grad(1);
  MlpGradients critic_grad;
  critic_grad.set_zero_like(critic_);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Vec in = critic_input(batch[i].s, batch[i].a[0]);
    const double q = critic_.forward(in, tape)[0];
    const double err = q - targets[i];
    loss += err * err * inv_b;
    out_grad[0] = 2.0 * err * inv_b;
    critic_.backward(tape, out_grad, sample_grad);
    critic_grad.axpy(1.0, sample_grad);
  }
  critic_opt_.update(critic_, critic_grad);
  return loss;
}

double DdpgAgent::actor_step(const std::vector<Transition>& batch) {
  if (batch.empty()) {
    throw std::invalid_argument("DdpgAgent::actor_step: empty batch");
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  double objective = 0.0;
  GradientTape tape;
  GradientTape actor_tape;
  MlpGradients sample_grad;
  MlpGradients critic_scratch;
  Vec out_grad(1);
  MlpGradients actor_grad;
  actor_grad.set_zero_like(actor_);
  // dQ/da is chained through the critic's input gradient
  for (const Transition& t : batch) {
    const double a = actor_.forward(t.s, actor_tape)[0];
    const double q = critic_.forward(critic_input(t.s, a), tape)[0];
    objective += q * inv_b;
    out_grad[0] = 1.0;
    critic_.backward(tape, out_grad, critic_scratch);
    out_grad[0] = critic_scratch.input[t.s.size()] * inv_b;
    actor_.backward(actor_tape, out_grad, sample_grad);
    actor_grad.axpy(1.0, sample_grad);
  }
  actor_grad.scale(-1.0);  // gradient ascent via the descent optimizer
  actor_opt_.update(actor_, actor_grad);
  return objective;
}

void DdpgAgent::update_targets() {
  polyak_update(actor_target_, actor_, cfg_.tau);
  polyak_update(critic_target_, critic_, cfg_.tau);
}

DdpgLosses DdpgAgent::train_step(ReplayBuffer& buf, Rng& rng) {
  if (buf.size() < cfg_.batch_size) {
    throw std::runtime_error("DdpgAgent::train_step: buffer smaller than batch");
  }
  const std::vector<Transition> batch = buf.sample(cfg_.batch_size, rng);
  DdpgLosses losses;
  losses.critic_loss = critic_step(batch);
  losses.actor_objective = actor_step(batch);
  update_targets();
  return losses;
}

void DdpgAgent::polyak_update(Mlp& target, const Mlp& main, double tau) {
  if (target.layer_dims() != main.layer_dims()) {
    throw std::invalid_argument("polyak_update: shape mismatch");
  }
  if (tau < 0.0 || tau > 1.0) {
    throw std::invalid_argument("polyak_update: tau must be in [0, 1]");
  }
  for (std::size_t l = 0; l < target.layer_count(); ++l) {
    target.weight(l) = (1.0 - tau) * target.weight(l) + tau * main.weight(l);
    target.bias(l) = (1.0 - tau) * target.bias(l) + tau * main.bias(l);
  }
}

}  // namespace swingup
