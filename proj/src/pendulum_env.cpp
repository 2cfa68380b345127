#include "swingup/pendulum_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swingup {

namespace {
constexpr double kPi = std::numbers::pi;
}

double angle_normalize(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("angle_normalize: non-finite angle");
  }
  // remainder() already lands in [-pi, pi] for a 2*pi divisor.
  return std::remainder(theta, 2.0 * kPi);
}

PendulumEnv::PendulumEnv(EnvParams params) : params_(params) {
  const bool positive = params_.gravity > 0.0 && params_.mass > 0.0 &&
                        params_.length > 0.0 && params_.dt > 0.0 &&
                        params_.max_torque > 0.0 && params_.max_speed > 0.0 &&
                        params_.episode_len > 0;
  if (!positive) {
    throw std::invalid_argument("PendulumEnv: parameters must be positive");
  }
}

Observation PendulumEnv::reset(Rng& rng) {
  const double theta = rng.uniform(-kPi, kPi);
  const double theta_dot = rng.uniform(-1.0, 1.0);
  return reset_to(theta, theta_dot);
}

Observation PendulumEnv::reset_to(double theta, double theta_dot) {
  state_.theta = angle_normalize(theta);
  state_.theta_dot = std::clamp(theta_dot, -params_.max_speed, params_.max_speed);
  state_.step_count = 0;
  active_ = true;
  return observe();
}

StepResult PendulumEnv::step(double action) {
  if (!active_) {
    throw std::logic_error("PendulumEnv::step: episode finished; reset first");
  }
  if (!std::isfinite(action)) {
    throw std::invalid_argument("PendulumEnv::step: non-finite action");
  }

  const double u = std::clamp(action, -params_.max_torque, params_.max_torque);
  const double reward = -(state_.theta * state_.theta +
                          0.1 * state_.theta_dot * state_.theta_dot +
                          0.001 * u * u);

  const double accel =
      3.0 * params_.gravity / (2.0 * params_.length) * std::sin(state_.theta) +
      3.0 / (params_.mass * params_.length * params_.length) * u;
  state_.theta_dot = std::clamp(state_.theta_dot + accel * params_.dt,
                                -params_.max_speed, params_.max_speed);
  state_.theta = angle_normalize(state_.theta + state_.theta_dot * params_.dt);
  ++state_.step_count;

  const bool done = state_.step_count >= params_.episode_len;
  if (done) active_ = false;
  return {observe(), reward, done};
}

double PendulumEnv::min_reward() const {
  return -(kPi * kPi + 0.1 * params_.max_speed * params_.max_speed +
           0.001 * params_.max_torque * params_.max_torque);
}

Observation PendulumEnv::observe() const {
  return {{std::cos(state_.theta), std::sin(state_.theta), state_.theta_dot}};
}

}  // namespace swingup
