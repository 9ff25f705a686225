#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ecmem/agent.hpp"
#include "ecmem/memory.hpp"

namespace ecmem {

struct ExperimentConfig {
  std::string env = "cartpole";
  Strategy strategy = Strategy::Lru;
  std::size_t memory_size = 10000;
  std::uint64_t total_steps = 15000;
  std::uint64_t eval_interval = 500;
  int eval_episodes = 10;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};

  double lambda = 0.99;
  KernelParams kernel{};  // k = 11, delta = 1e-3
  EpsilonSchedule epsilon{};
  bool projection = false;
  std::size_t projection_dim = 128;
  Backend backend = Backend::SpatialTree;
  // Env steps per agent decision; 0 = the environment's benchmark default.
  int action_repeat = 0;

  void validate() const;  // throws ConfigError naming the offending field
};

struct EvalRecord {
  std::uint64_t seed = 0;
  std::string env;
  std::string strategy;
  std::size_t memory_size = 0;
  std::uint64_t step = 0;
  double mean_eval_reward = 0.0;
};

// One agent per seed, run to total_steps; rows ordered (seed, step). Seeds
// execute concurrently up to ECMEM_THREADS (default: hardware concurrency);
// results are identical regardless of the thread count.
std::vector<EvalRecord> run_experiment(const ExperimentConfig& config);

// Single-seed building block used by run_experiment.
std::vector<EvalRecord> run_single(const ExperimentConfig& config,
                                   std::uint64_t seed);

void write_csv(const std::vector<EvalRecord>& records, std::ostream& out);
void write_csv_file(const std::vector<EvalRecord>& records,
                    const std::string& path);
std::vector<EvalRecord> read_csv(std::istream& in);
std::vector<EvalRecord> read_csv_file(const std::string& path);

struct AggregateRow {
  std::string env;
  std::string strategy;
  std::size_t memory_size = 0;
  std::size_t seed_count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population std across per-seed means
};

// Reporting protocol behind the result tables: per seed, the mean of the
// last `last_n` evaluations; then mean and population stddev across seeds.
// One row per (env, strategy, memory_size), sorted.
std::vector<AggregateRow> aggregate_final(const std::vector<EvalRecord>& records,
                                          std::size_t last_n = 10);

std::string format_table(const std::vector<AggregateRow>& rows);

}  // namespace ecmem
