#include "swingup/ppo_agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swingup {

PpoAgent::PpoAgent(PpoConfig cfg, Rng& rng)
    : cfg_(cfg),
      actor_mean_({3, 128, 64, 64, 1},
                  {Activation::kRelu, Activation::kScaledTanh, cfg.max_action,
                   0.0},
                  rng),
      raw_std_(Vec::Constant(
          1, softplus_inverse(cfg.init_std - DiagGaussian::kStdFloor))),
      critic_({3, 64, 64, 64, 1},
              {Activation::kRelu, Activation::kLinear, 1.0, 0.0}, rng),
      actor_opt_(actor_mean_, {cfg.actor_lr}),
      std_opt_(raw_std_.size(), {cfg.actor_lr}),
      critic_opt_(critic_, {cfg.critic_lr}),
      beta_(cfg.beta) {}

PolicySample PpoAgent::act(const Vec& obs, Rng& rng) {
  const DiagGaussian dist = distribution(obs);
  PolicySample out;
  out.action = dist.sample(rng);
  out.logp = dist.log_prob(out.action);
  out.value = critic_.forward(obs)[0];
  return out;
}

double PpoAgent::greedy_action(const Vec& obs) const {
  const double mean = actor_mean_.forward(obs)[0];
  return std::clamp(mean, -cfg_.max_action, cfg_.max_action);
}

double PpoAgent::value(const Vec& obs) const {
  return critic_.forward(obs)[0];
}

DiagGaussian PpoAgent::distribution(const Vec& obs) const {
  return DiagGaussian::from_raw_std(actor_mean_.forward(obs), raw_std_);
}

double PpoAgent::clip_objective(double ratio, double adv, double epsilon) {
  const double g = adv >= 0.0 ? (1.0 + epsilon) * adv : (1.0 - epsilon) * adv;
  return std::min(ratio * adv, g);
}

double PpoAgent::adapt_beta(double beta, double mean_kl, double kl_target) {
  double next = beta;
  if (mean_kl >= 1.5 * kl_target) {
    next = 2.0 * beta;
  } else if (mean_kl <= kl_target / 1.5) {
    next = 0.5 * beta;
  }
  return std::clamp(next, 1e-4, 10.0);
}

PpoAgent::SurrogateEval PpoAgent::eval_surrogate(const RolloutBuffer& buf,
                                                 const std::vector<int>& idx,
                                                 const Mlp& old_actor,
                                                 const Vec& old_raw_std,
                                                 bool with_grad) const {
  if (idx.empty()) {
    throw std::invalid_argument("eval_surrogate: empty index set");
  }
  SurrogateEval ev;
  if (with_grad) {
    ev.d_actor.set_zero_like(actor_mean_);
    ev.d_raw_std = Vec::Zero(raw_std_.size());
  }
  Vec old_std = softplus(old_raw_std);
  old_std.array() += DiagGaussian::kStdFloor;
  const Vec std_chain = sigmoid(raw_std_);  // d std / d raw

  GradientTape tape;
  MlpGradients sample_grad;
  for (int i : idx) {
    const Vec& obs = buf.obs(static_cast<std::size_t>(i));
    const Vec& action = buf.action(static_cast<std::size_t>(i));
    const double adv = buf.advantage(static_cast<std::size_t>(i));
    const double logp_old = buf.logp(static_cast<std::size_t>(i));

    const DiagGaussian dist_new =
        DiagGaussian::from_raw_std(actor_mean_.forward(obs, tape), raw_std_);
    const DiagGaussian dist_old(old_actor.forward(obs), old_std);
    const double logp_new = dist_new.log_prob(action);
    const double ratio = std::exp(logp_new - logp_old);
    const double kl = kl_divergence(dist_old, dist_new);
    ev.mean_kl += kl;

    double d_logp = 0.0;  // d objective / d logp_new
    Vec d_mean = Vec::Zero(dist_new.mean.size());
    Vec d_std = Vec::Zero(dist_new.std.size());
    if (cfg_.method == PpoMethod::kClip) {
      const double surr = ratio * adv;
      const double g = adv >= 0.0 ? (1.0 + cfg_.clip_epsilon) * adv
                                  : (1.0 - cfg_.clip_epsilon) * adv;
      ev.objective += std::min(surr, g) + cfg_.entropy_coeff * dist_new.entropy();
      if (with_grad) {
        d_logp = surr <= g ? adv * ratio : 0.0;
        const DistGrad lp = log_prob_grad(dist_new, action);
        d_mean = d_logp * lp.mean;
        d_std = d_logp * lp.std +
                cfg_.entropy_coeff * entropy_grad(dist_new).std;
      }
    } else {
      ev.objective += ratio * adv - beta_ * kl;
      if (with_grad) {
        d_logp = adv * ratio;
        const DistGrad lp = log_prob_grad(dist_new, action);
        const DistGrad klg = kl_grad_new(dist_old, dist_new);
        d_mean = d_logp * lp.mean - beta_ * klg.mean;
        d_std = d_logp * lp.std - beta_ * klg.std;
      }
    }

    if (with_grad) {
      actor_mean_.backward(tape, d_mean, sample_grad);
      ev.d_actor.axpy(1.0, sample_grad);
      ev.d_raw_std += d_std.cwiseProduct(std_chain);
    }
  }

  const double inv_n = 1.0 / static_cast<double>(idx.size());
  ev.objective *= inv_n;
  ev.mean_kl *= inv_n;
  if (with_grad) {
    ev.d_actor.scale(inv_n);
    ev.d_raw_std *= inv_n;
  }
  return ev;
}

double PpoAgent::critic_loss(const RolloutBuffer& buf,
                             const std::vector<int>& idx) const {
  double loss = 0.0;
  for (int i : idx) {
    const double err = critic_.forward(buf.obs(static_cast<std::size_t>(i)))[0] -
                       buf.ret(static_cast<std::size_t>(i));
    loss += err * err;
  }
  return loss / static_cast<double>(idx.size());
}

PpoTrainStats PpoAgent::train(RolloutBuffer& buf, Rng& rng) {
  if (!buf.sealed()) {
    throw std::runtime_error("PpoAgent::train: buffer empty or not sealed");
  }
  if (cfg_.epochs < 1) {
    throw std::invalid_argument("PpoAgent::train: epochs must be >= 1");
  }
  const Mlp old_actor = actor_mean_;
  const Vec old_raw_std = raw_std_;

  double sum_obj = 0.0;
  double sum_kl = 0.0;
  double sum_critic = 0.0;
  std::size_t stat_samples = 0;

  GradientTape tape;
  MlpGradients sample_grad;
  MlpGradients critic_grad;
  Vec out_grad(1);
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    const bool last_epoch = epoch + 1 == cfg_.epochs;
    const auto batches =
        buf.minibatch_indices(cfg_.batch_size, rng, cfg_.normalize_adv);
    for (const auto& idx : batches) {
      SurrogateEval ev =
          eval_surrogate(buf, idx, old_actor, old_raw_std, /*with_grad=*/true);

      // ascend: hand the optimizer the negated gradient
      ev.d_actor.scale(-1.0);
      actor_opt_.update(actor_mean_, ev.d_actor);
      Vec d_raw = -ev.d_raw_std;
      std_opt_.update(raw_std_, d_raw);

      // critic regression toward the rewards-to-go
      const double inv_b = 1.0 / static_cast<double>(idx.size());
      critic_grad.set_zero_like(critic_);
      double batch_critic_loss = 0.0;
      for (int i : idx) {
        const double v =
            critic_.forward(buf.obs(static_cast<std::size_t>(i)), tape)[0];
        const double err = v - buf.ret(static_cast<std::size_t>(i));
        batch_critic_loss += err * err * inv_b;
        out_grad[0] = 2.0 * err * inv_b;
        critic_.backward(tape, out_grad, sample_grad);
        critic_grad.axpy(1.0, sample_grad);
      }
      critic_opt_.update(critic_, critic_grad);

      if (last_epoch) {
        const double n = static_cast<double>(idx.size());
        sum_obj += ev.objective * n;
        sum_kl += ev.mean_kl * n;
        sum_critic += batch_critic_loss * n;
        stat_samples += idx.size();
      }
    }
  }

  PpoTrainStats stats;
  const double n = static_cast<double>(stat_samples);
  stats.actor_loss = -sum_obj / n;
  stats.critic_loss = sum_critic / n;
  stats.mean_kl = sum_kl / n;
  if (cfg_.method == PpoMethod::kPenalty) {
    beta_ = adapt_beta(beta_, stats.mean_kl, cfg_.kl_target);
  }
  stats.beta_after = beta_;
  return stats;
}

}  // namespace swingup
