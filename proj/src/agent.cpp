#include "ecmem/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace ecmem {

namespace {

// Stream tags for deriving independent RNG/seed streams from one run seed.
constexpr std::uint64_t kTagAgent = 0x01;
constexpr std::uint64_t kTagTrainEnv = 0x02;
constexpr std::uint64_t kTagEvalEnv = 0x03;
constexpr std::uint64_t kTagEvalRng = 0x04;
constexpr std::uint64_t kTagProjection = 0x05;

}  // namespace

double EpsilonSchedule::at(std::uint64_t step) const {
  if (step <= anneal_start) return initial;
  if (step >= anneal_end) return final_value;
  const double progress = static_cast<double>(step - anneal_start) /
                          static_cast<double>(anneal_end - anneal_start);
  return initial + (final_value - initial) * progress;
}

std::vector<double> episode_returns(std::span<const double> rewards,
                                    double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("episode_returns: lambda must be in [0,1]");
  std::vector<double> returns(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + lambda * acc;
    returns[i] = acc;
  }
  return returns;
}

GaussianProjection::GaussianProjection(std::size_t input_dim,
                                       std::size_t output_dim,
                                       std::uint64_t seed)
    : input_dim_(input_dim), output_dim_(output_dim) {
  if (input_dim < 1 || output_dim < 1)
    throw std::invalid_argument("GaussianProjection: dimensions must be >= 1");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(output_dim));
  matrix_.resize(input_dim * output_dim);
  for (double& entry : matrix_) entry = scale * rng.normal();
}

std::vector<double> GaussianProjection::apply(
    std::span<const double> observation) const {
  if (observation.size() != input_dim_)
    throw std::invalid_argument("GaussianProjection: observation dim mismatch");
  std::vector<double> key(output_dim_, 0.0);
  for (std::size_t r = 0; r < output_dim_; ++r) {
    const double* row = matrix_.data() + r * input_dim_;
    double acc = 0.0;
    for (std::size_t c = 0; c < input_dim_; ++c) acc += row[c] * observation[c];
    key[r] = acc;
  }
  return key;
}

MfecAgent::MfecAgent(const Config& config, std::uint64_t seed)
    : cfg_(config), rng_(Rng::derive(seed, kTagAgent)) {
  if (cfg_.num_actions < 1)
    throw std::invalid_argument("MfecAgent: num_actions must be >= 1");
  if (cfg_.obs_dim < 1)
    throw std::invalid_argument("MfecAgent: obs_dim must be >= 1");
  if (cfg_.projection)
    projection_.emplace(cfg_.obs_dim, cfg_.projection_dim,
                        Rng::derive(seed, kTagProjection));

  ActionMemory::Options mem;
  mem.capacity = cfg_.memory_size;
  mem.key_dim = key_dim();
  mem.strategy = cfg_.strategy;
  mem.backend = cfg_.backend;
  mem.kernel = cfg_.kernel;
  mem.dkm_decrement = cfg_.dkm_decrement;
  memories_.reserve(cfg_.num_actions);
  for (int a = 0; a < cfg_.num_actions; ++a) memories_.emplace_back(mem);
}

std::size_t MfecAgent::key_dim() const {
  return cfg_.projection ? cfg_.projection_dim : cfg_.obs_dim;
}

std::vector<double> MfecAgent::make_key(
    std::span<const double> observation) const {
  if (projection_) return projection_->apply(observation);
  return {observation.begin(), observation.end()};
}

int MfecAgent::act(std::span<const double> key) {
  const double eps = cfg_.epsilon.at(step_);
  if (eps > 0.0 && rng_.uniform() < eps)
    return static_cast<int>(rng_.uniform_int(cfg_.num_actions));
  const auto best = lookup_best_action(memories_, key, step_, /*touch=*/true);
  if (!best) return static_cast<int>(rng_.uniform_int(cfg_.num_actions));
  return best->action;
}

int MfecAgent::act_greedy(std::span<const double> key, Rng& rng) const {
  auto memories = std::span<ActionMemory>(
      const_cast<std::vector<ActionMemory>&>(memories_));
  const auto best = lookup_best_action(memories, key, step_, /*touch=*/false);
  if (!best) return static_cast<int>(rng.uniform_int(cfg_.num_actions));
  return best->action;
}

void MfecAgent::observe(std::span<const double> key, int action,
                        double reward) {
  if (action < 0 || action >= cfg_.num_actions)
    throw std::invalid_argument("MfecAgent: action out of range");
  if (trace_.empty()) episode_start_ = step_;
  trace_.push_back({{key.begin(), key.end()}, action, reward});
  ++step_;
}

void MfecAgent::end_episode() {
  if (trace_.empty()) return;
  std::vector<double> rewards(trace_.size());
  for (std::size_t i = 0; i < trace_.size(); ++i) rewards[i] = trace_[i].reward;
  const std::vector<double> returns = episode_returns(rewards, cfg_.lambda);
  for (std::size_t i = 0; i < trace_.size(); ++i) {
    memories_[trace_[i].action].insert(trace_[i].key, returns[i],
                                       episode_start_ + i);
  }
  if (on_commit) on_commit(trace_, returns);
  trace_.clear();
}

double evaluate_greedy(const MfecAgent& agent, const Env& env_proto,
                       int episodes, std::uint64_t seed, int action_repeat) {
  auto env = env_proto.fresh();
  env->seed(Rng::derive(seed, kTagEvalEnv));
  Rng rng(Rng::derive(seed, kTagEvalRng));
  double total = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    std::vector<double> obs = env->reset();
    bool finished = false;
    while (!finished) {
      const auto key = agent.make_key(obs);
      const int action = agent.act_greedy(key, rng);
      for (int k = 0; k < action_repeat && !finished; ++k) {
        StepResult result = env->step(action);
        total += result.reward;
        finished = result.done || result.truncated;
        if (!finished) obs = std::move(result.observation);
      }
    }
  }
  return total / static_cast<double>(episodes);
}

std::vector<EvalPoint> run_training(MfecAgent& agent, Env& env,
                                    const RunOptions& options) {
  if (options.total_steps < 1)
    throw std::invalid_argument("run_training: total_steps must be >= 1");
  if (options.eval_interval < 1)
    throw std::invalid_argument("run_training: eval_interval must be >= 1");
  const int repeat = options.action_repeat > 0 ? options.action_repeat
                                               : env.default_action_repeat();

  std::vector<EvalPoint> evals;
  env.seed(Rng::derive(options.seed, kTagTrainEnv));
  std::vector<double> obs = env.reset();

  for (std::uint64_t t = 1; t <= options.total_steps; ++t) {
    const auto key = agent.make_key(obs);
    const int action = agent.act(key);
    // One decision is held for `repeat` env steps; the trace records the
    // summed reward, so returns discount per decision.
    double reward = 0.0;
    bool finished = false;
    for (int k = 0; k < repeat && !finished; ++k) {
      StepResult result = env.step(action);
      reward += result.reward;
      finished = result.done || result.truncated;
      if (!finished) obs = std::move(result.observation);
    }
    agent.observe(key, action, reward);
    if (finished) {
      agent.end_episode();
      obs = env.reset();
    }

    if (t % options.eval_interval == 0) {
      const double mean = evaluate_greedy(
          agent, env, options.eval_episodes,
          Rng::derive(options.seed, (t / options.eval_interval) << 8), repeat);
      evals.push_back({t, mean});
    }
  }
  // A partial episode cut off by the end of training is still worth its
  // Monte-Carlo returns.
  agent.end_episode();
  return evals;
}

}  // namespace ecmem
