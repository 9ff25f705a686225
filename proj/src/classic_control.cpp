#include "ecmem/classic_control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ecmem {

namespace {

double wrap_angle(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  while (x > std::numbers::pi) x -= two_pi;
  while (x < -std::numbers::pi) x += two_pi;
  return x;
}

}  // namespace

std::vector<double> CartpoleEnv::reset() {
  for (double& v : state_) v = rng_.uniform(-0.05, 0.05);
  steps_ = 0;
  finished_ = false;
  return {state_.begin(), state_.end()};
}

StepResult CartpoleEnv::step(int action) {
  if (action < 0 || action > 1)
    throw std::invalid_argument("CartpoleEnv: action must be 0 or 1");
  if (finished_) throw std::logic_error("CartpoleEnv: step after episode end");

  const double force = action == 1 ? kForceMag : -kForceMag;
  double x = state_[0], x_dot = state_[1], theta = state_[2],
         theta_dot = state_[3];
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double temp =
      (force + kPoleMassLength * theta_dot * theta_dot * sin_t) / kTotalMass;
  const double theta_acc =
      (kGravity * sin_t - cos_t * temp) /
      (kHalfLength * (4.0 / 3.0 - kMassPole * cos_t * cos_t / kTotalMass));
  const double x_acc = temp - kPoleMassLength * theta_acc * cos_t / kTotalMass;

  // Semi-implicit-free Euler: positions advance with the old velocities.
  x += kTau * x_dot;
  x_dot += kTau * x_acc;
  theta += kTau * theta_dot;
  theta_dot += kTau * theta_acc;
  state_ = {x, x_dot, theta, theta_dot};
  ++steps_;

  const bool done = x < -kXThreshold || x > kXThreshold ||
                    theta < -kThetaThreshold || theta > kThetaThreshold;
  const bool truncated = !done && steps_ >= kStepCap;
  finished_ = done || truncated;
  return {{state_.begin(), state_.end()}, 1.0, done, truncated};
}

std::vector<double> AcrobotEnv::reset() {
  for (double& v : state_) v = rng_.uniform(-0.1, 0.1);
  steps_ = 0;
  finished_ = false;
  return observation();
}

std::vector<double> AcrobotEnv::observation() const {
  return {std::cos(state_[0]), std::sin(state_[0]), std::cos(state_[1]),
          std::sin(state_[1]), state_[2], state_[3]};
}

namespace {

// Equations of motion for the two-link underactuated pendulum; state is
// (theta1, theta2, dtheta1, dtheta2), torque applied at the second joint.
std::array<double, 4> acrobot_derivatives(const std::array<double, 4>& s,
                                          double torque) {
  constexpr double m = AcrobotEnv::kLinkMass;
  constexpr double l1 = AcrobotEnv::kLink1Length;
  constexpr double lc = AcrobotEnv::kLinkComPos;
  constexpr double inertia = AcrobotEnv::kLinkInertia;
  constexpr double g = AcrobotEnv::kGravity;
  const double theta1 = s[0], theta2 = s[1], dtheta1 = s[2], dtheta2 = s[3];

  const double d1 = m * lc * lc +
                    m * (l1 * l1 + lc * lc + 2.0 * l1 * lc * std::cos(theta2)) +
                    inertia + inertia;
  const double d2 = m * (lc * lc + l1 * lc * std::cos(theta2)) + inertia;
  const double phi2 =
      m * lc * g * std::cos(theta1 + theta2 - std::numbers::pi / 2.0);
  const double phi1 =
      -m * l1 * lc * dtheta2 * dtheta2 * std::sin(theta2) -
      2.0 * m * l1 * lc * dtheta2 * dtheta1 * std::sin(theta2) +
      (m * lc + m * l1) * g * std::cos(theta1 - std::numbers::pi / 2.0) + phi2;
  const double ddtheta2 =
      (torque + d2 / d1 * phi1 - m * l1 * lc * dtheta1 * dtheta1 * std::sin(theta2) -
       phi2) /
      (m * lc * lc + inertia - d2 * d2 / d1);
  const double ddtheta1 = -(d2 * ddtheta2 + phi1) / d1;
  return {dtheta1, dtheta2, ddtheta1, ddtheta2};
}

std::array<double, 4> rk4_step(const std::array<double, 4>& s, double torque,
                               double dt) {
  auto add = [](const std::array<double, 4>& a, const std::array<double, 4>& b,
                double scale) {
    std::array<double, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = a[i] + scale * b[i];
    return out;
  };
  const auto k1 = acrobot_derivatives(s, torque);
  const auto k2 = acrobot_derivatives(add(s, k1, dt / 2.0), torque);
  const auto k3 = acrobot_derivatives(add(s, k2, dt / 2.0), torque);
  const auto k4 = acrobot_derivatives(add(s, k3, dt), torque);
  std::array<double, 4> out;
  for (int i = 0; i < 4; ++i)
    out[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

StepResult AcrobotEnv::step(int action) {
  if (action < 0 || action > 2)
    throw std::invalid_argument("AcrobotEnv: action must be 0, 1 or 2");
  if (finished_) throw std::logic_error("AcrobotEnv: step after episode end");

  const double torque = static_cast<double>(action - 1);
  state_ = rk4_step(state_, torque, kDt);
  state_[0] = wrap_angle(state_[0]);
  state_[1] = wrap_angle(state_[1]);
  state_[2] = std::clamp(state_[2], -kMaxVel1, kMaxVel1);
  state_[3] = std::clamp(state_[3], -kMaxVel2, kMaxVel2);
  ++steps_;

  const bool done =
      -std::cos(state_[0]) - std::cos(state_[1] + state_[0]) > 1.0;
  const bool truncated = !done && steps_ >= kStepCap;
  finished_ = done || truncated;
  return {observation(), -1.0, done, truncated};
}

}  // namespace ecmem
