#pragma once

#include <array>

#include "swingup/rng.hpp"
#include "swingup/types.hpp"

namespace swingup {

/// Physical constants and episode contract of the torque-limited pendulum.
struct EnvParams {
  double gravity = 10.0;    ///< m/s^2
  double mass = 1.0;        ///< kg
  double length = 1.0;      ///< m
  double dt = 0.05;         ///< integration step, s
  double max_torque = 2.0;  ///< action clamp, N*m
  double max_speed = 8.0;   ///< angular velocity clamp, rad/s
  int episode_len = 200;    ///< steps per episode
};

/// What the agent sees: [cos(theta), sin(theta), theta_dot].
struct Observation {
  std::array<double, 3> components{};

  double operator[](std::size_t i) const { return components[i]; }
  Vec vec() const {
    Vec v(3);
    v << components[0], components[1], components[2];
    return v;
  }
};

/// Internal state. theta = 0 is upright; theta is kept in [-pi, pi] and
/// theta_dot in [-max_speed, max_speed] at all times.
struct PendulumState {
  double theta = 0.0;
  double theta_dot = 0.0;
  int step_count = 0;
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool done = false;
};

/// Principal angle in [-pi, pi], congruent to theta mod 2*pi.
double angle_normalize(double theta);

/// Pendulum swing-up task. Episodes run a fixed number of steps (time-limit
/// truncation only, there is no failure terminal). The per-step reward is
/// -(theta^2 + 0.1*theta_dot^2 + 0.001*u^2), evaluated on the state BEFORE
/// the dynamics update, with u the clamped torque. Dynamics use semi-implicit
/// Euler: velocity first, then angle from the new velocity.
class PendulumEnv {
 public:
  explicit PendulumEnv(EnvParams params = {});

  /// Starts a fresh episode: theta ~ U[-pi, pi), theta_dot ~ U[-1, 1),
  /// drawn in that order.
  Observation reset(Rng& rng);

  /// Starts a fresh episode from an exact state (evaluation and tests).
  Observation reset_to(double theta, double theta_dot);

  /// Advances one step. Throws std::logic_error when the episode already
  /// finished and std::invalid_argument for a non-finite action.
  StepResult step(double action);

  const PendulumState& state() const { return state_; }
  const EnvParams& params() const { return params_; }

  /// Analytic lower bound of the per-step reward over reachable states.
  double min_reward() const;

 private:
  Observation observe() const;

  EnvParams params_;
  PendulumState state_;
  bool active_ = false;
};

}  // namespace swingup
