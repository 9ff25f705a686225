#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ecmem/env.hpp"
#include "ecmem/memory.hpp"
#include "ecmem/rng.hpp"

namespace ecmem {

// Exploration schedule: `initial` until anneal_start, linear decay to
// `final` at anneal_end, constant after.
struct EpsilonSchedule {
  double initial = 1.0;
  double final_value = 5e-3;
  std::uint64_t anneal_start = 5000;
  std::uint64_t anneal_end = 25000;

  double at(std::uint64_t step) const;
};

// Per-step discounted suffix returns: out[t] = rewards[t] + lambda*out[t+1].
// Computed backwards so the recurrence holds exactly in floating point.
std::vector<double> episode_returns(std::span<const double> rewards,
                                    double lambda);

// Random linear map for key compression (Johnson-Lindenstrauss style):
// entries are i.i.d. standard normal scaled by 1/sqrt(output_dim), so
// squared distances are preserved in expectation.
class GaussianProjection {
 public:
  GaussianProjection(std::size_t input_dim, std::size_t output_dim,
                     std::uint64_t seed);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }

  std::vector<double> apply(std::span<const double> observation) const;

 private:
  std::size_t input_dim_;
  std::size_t output_dim_;
  std::vector<double> matrix_;  // row-major, output_dim x input_dim
};

struct TraceStep {
  std::vector<double> key;
  int action;
  double reward;
};

// Model-free episodic-control agent: epsilon-greedy over per-action episodic
// memories during training, Monte-Carlo returns committed at episode end.
class MfecAgent {
 public:
  struct Config {
    int num_actions = 0;
    std::size_t obs_dim = 0;
    double lambda = 0.99;
    KernelParams kernel{};
    std::size_t memory_size = 10000;
    Strategy strategy = Strategy::Lru;
    Backend backend = Backend::SpatialTree;
    EpsilonSchedule epsilon{};
    bool projection = false;
    std::size_t projection_dim = 128;
    std::optional<double> dkm_decrement{};
  };

  MfecAgent(const Config& config, std::uint64_t seed);

  std::size_t key_dim() const;
  std::uint64_t steps_taken() const { return step_; }
  double epsilon_now() const { return cfg_.epsilon.at(step_); }

  std::vector<double> make_key(std::span<const double> observation) const;

  // Training action: epsilon-greedy, stamps retrieved entries.
  int act(std::span<const double> key);
  // Evaluation action: pure argmax, no memory mutation; the rng is only
  // consumed when every action memory is still empty.
  int act_greedy(std::span<const double> key, Rng& rng) const;

  // Records one environment transition and advances the step counter.
  void observe(std::span<const double> key, int action, double reward);
  // Computes discounted returns for the buffered episode and writes every
  // (key, action, return) into the corresponding action memory, in time
  // order. No-op on an empty buffer.
  void end_episode();

  const ActionMemory& memory(int action) const { return memories_[action]; }
  ActionMemory& memory(int action) { return memories_[action]; }
  int num_actions() const { return cfg_.num_actions; }
  const std::vector<TraceStep>& pending_trace() const { return trace_; }

  // Test/diagnostic hook, invoked per committed episode with the trace and
  // its per-step returns.
  std::function<void(const std::vector<TraceStep>&, const std::vector<double>&)>
      on_commit;

 private:
  Config cfg_;
  Rng rng_;
  std::optional<GaussianProjection> projection_;
  std::vector<ActionMemory> memories_;
  std::vector<TraceStep> trace_;
  std::uint64_t step_ = 0;
  std::uint64_t episode_start_ = 0;
};

struct EvalPoint {
  std::uint64_t step;
  double mean_reward;
};

struct RunOptions {
  std::uint64_t total_steps = 0;  // agent decisions
  std::uint64_t eval_interval = 500;
  int eval_episodes = 10;
  std::uint64_t seed = 0;
  // Env steps per decision; 0 picks the environment's benchmark default.
  int action_repeat = 0;
};

// Greedy evaluation probe: `episodes` argmax rollouts on a fresh copy of the
// environment, holding each decision for `action_repeat` env steps. Leaves
// the agent's memories untouched.
double evaluate_greedy(const MfecAgent& agent, const Env& env_proto,
                       int episodes, std::uint64_t seed, int action_repeat = 1);

// Trains for exactly total_steps decisions (each held for action_repeat env
// steps), evaluating every eval_interval decisions. Evaluation does not
// advance the step counter.
std::vector<EvalPoint> run_training(MfecAgent& agent, Env& env,
                                    const RunOptions& options);

}  // namespace ecmem
