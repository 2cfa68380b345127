#pragma once

#include <vector>

#include "swingup/adam.hpp"
#include "swingup/buffers.hpp"
#include "swingup/gaussian.hpp"
#include "swingup/mlp.hpp"
#include "swingup/rng.hpp"
#include "swingup/types.hpp"

namespace swingup {

enum class PpoMethod { kClip, kPenalty };

struct PpoConfig {
  PpoMethod method = PpoMethod::kClip;
  double actor_lr = 1e-4;
  double critic_lr = 2e-4;
  double clip_epsilon = 0.2;
  double beta = 0.5;       ///< initial KL penalty coefficient
  double kl_target = 0.01;
  int epochs = 20;
  std::size_t batch_size = 200;
  double entropy_coeff = 0.01;  ///< clip-method entropy bonus
  bool normalize_adv = true;
  double max_action = 2.0;
  double init_std = 1.0;
};

struct PpoTrainStats {
  double actor_loss = 0.0;   ///< negated mean surrogate objective, final epoch
  double critic_loss = 0.0;  ///< mean (V - ret)^2, final epoch
  double mean_kl = 0.0;      ///< mean KL(old || new), final epoch
  double beta_after = 0.0;
};

struct PolicySample {
  Vec action;  ///< raw (unclamped) sample; callers clamp before executing
  double logp = 0.0;
  double value = 0.0;
};

/// Stochastic-policy agent: a mean network with a scaled-tanh head, one
/// learned state-independent raw-std parameter (std = softplus(raw) + floor),
/// and a separate V critic. train() runs either the clipped-surrogate or the
/// adaptive-KL-penalty update over a sealed rollout buffer.
class PpoAgent {
 public:
  PpoAgent(PpoConfig cfg, Rng& rng);

  /// Samples an action, recording the log-probability of the raw
  /// (unclamped) sample, and evaluates the critic.
  PolicySample act(const Vec& obs, Rng& rng);

  /// Clamped mean action (evaluation rollouts).
  double greedy_action(const Vec& obs) const;

  double value(const Vec& obs) const;
  DiagGaussian distribution(const Vec& obs) const;

  /// Runs `epochs` passes of shuffled minibatches over the sealed buffer.
  /// The actor ascends on the surrogate objective (clip: clipped ratio
  /// term plus entropy bonus; penalty: ratio term minus beta * KL against
  /// the pre-training policy), the critic descends on (V - ret)^2, and the
  /// penalty variant then adapts beta. Callers clear the buffer afterwards.
  PpoTrainStats train(RolloutBuffer& buf, Rng& rng);

  /// min(ratio * adv, g(epsilon, adv)) with g = (1+eps)*adv for adv >= 0,
  /// (1-eps)*adv otherwise.
  static double clip_objective(double ratio, double adv, double epsilon);

  /// Doubles beta when mean_kl >= 1.5*target, halves it when
  /// mean_kl <= target/1.5, and clamps the result to [1e-4, 10].
  static double adapt_beta(double beta, double mean_kl, double kl_target);

  /// Mean surrogate objective, KL, and ascent gradients over the given rows,
  /// evaluated at the current parameters against a frozen old policy.
  struct SurrogateEval {
    double objective = 0.0;
    double mean_kl = 0.0;
    MlpGradients d_actor;
    Vec d_raw_std;
  };
  SurrogateEval eval_surrogate(const RolloutBuffer& buf,
                               const std::vector<int>& idx,
                               const Mlp& old_actor, const Vec& old_raw_std,
                               bool with_grad) const;

  /// Mean (V(s) - ret)^2 over the given rows.
  double critic_loss(const RolloutBuffer& buf,
                     const std::vector<int>& idx) const;

  const PpoConfig& config() const { return cfg_; }
  double beta() const { return beta_; }
  void set_beta(double beta) { beta_ = beta; }
  Mlp& actor_mean() { return actor_mean_; }
  const Mlp& actor_mean() const { return actor_mean_; }
  Vec& raw_std() { return raw_std_; }
  const Vec& raw_std() const { return raw_std_; }
  Mlp& critic() { return critic_; }
  const Mlp& critic() const { return critic_; }

 private:
  PpoConfig cfg_;
  Mlp actor_mean_;
  Vec raw_std_;
  Mlp critic_;
  MlpAdam actor_opt_;
  VectorAdam std_opt_;
  MlpAdam critic_opt_;
  double beta_;
};

}  // namespace swingup
