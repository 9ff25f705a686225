#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

namespace ecmem {

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;       // environment-terminal
  bool truncated = false;  // step cap hit
};

// Episodic environment with discrete actions. Instances are deterministic
// given (seed, action sequence) and owned by a single agent.
class Env {
 public:
  virtual ~Env() = default;

  virtual void seed(std::uint64_t s) = 0;
  virtual std::vector<double> reset() = 0;
  virtual StepResult step(int action) = 0;

  virtual int num_actions() const = 0;
  virtual std::size_t obs_dim() const = 0;
  virtual std::string_view name() const = 0;

  // Benchmark-default action persistence: how many consecutive env steps
  // one agent decision is held for. 1 except where the standard protocol
  // for the environment says otherwise.
  virtual int default_action_repeat() const { return 1; }

  // A brand-new unseeded instance of the same environment (for evaluation
  // rollouts that must not disturb the training episode in progress).
  virtual std::unique_ptr<Env> fresh() const = 0;
};

// Factory for the built-in environments: "cartpole", "acrobot", "openroom",
// "fourroom". Throws ConfigError on unknown names.
std::unique_ptr<Env> make_env(std::string_view name);

}  // namespace ecmem
