#include "ecmem/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "ecmem/env.hpp"
#include "ecmem/errors.hpp"

namespace ecmem {

namespace {

std::string format_double(double v) {
  // Shortest representation that round-trips; locale-independent.
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::size_t thread_budget(std::size_t jobs) {
  std::size_t budget = std::thread::hardware_concurrency();
  if (budget == 0) budget = 1;
  if (const char* env = std::getenv("ECMEM_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed >= 1) budget = static_cast<std::size_t>(parsed);
  }
  return std::min(budget, jobs);
}

}  // namespace

void ExperimentConfig::validate() const {
  make_env(env);  // throws ConfigError("env", ...) on unknown names
  if (memory_size < 1)
    throw ConfigError("memory_size", "memory_size must be >= 1");
  if (total_steps < 1) throw ConfigError("total_steps", "total_steps must be >= 1");
  if (eval_interval < 1)
    throw ConfigError("eval_interval", "eval_interval must be >= 1");
  if (eval_episodes < 1)
    throw ConfigError("eval_episodes", "eval_episodes must be >= 1");
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed required");
  if (lambda < 0.0 || lambda > 1.0)
    throw ConfigError("lambda", "lambda must be in [0,1]");
  if (!(kernel.delta > 0.0)) throw ConfigError("delta", "delta must be > 0");
  if (kernel.k < 1) throw ConfigError("k", "k must be >= 1");
  if (epsilon.final_value < 0.0 || epsilon.initial > 1.0 ||
      epsilon.final_value > epsilon.initial)
    throw ConfigError("epsilon", "need 0 <= final <= initial <= 1");
  if (epsilon.anneal_start > epsilon.anneal_end)
    throw ConfigError("epsilon", "anneal_start must be <= anneal_end");
  if (projection && projection_dim < 1)
    throw ConfigError("projection_key_size", "projection key size must be >= 1");
  if (action_repeat < 0)
    throw ConfigError("action_repeat", "action_repeat must be >= 0");
}

std::vector<EvalRecord> run_single(const ExperimentConfig& config,
                                   std::uint64_t seed) {
  auto env = make_env(config.env);

  MfecAgent::Config agent_cfg;
  agent_cfg.num_actions = env->num_actions();
  agent_cfg.obs_dim = env->obs_dim();
  agent_cfg.lambda = config.lambda;
  agent_cfg.kernel = config.kernel;
  agent_cfg.memory_size = config.memory_size;
  agent_cfg.strategy = config.strategy;
  agent_cfg.backend = config.backend;
  agent_cfg.epsilon = config.epsilon;
  agent_cfg.projection = config.projection;
  agent_cfg.projection_dim = config.projection_dim;
  MfecAgent agent(agent_cfg, seed);

  RunOptions run;
  run.total_steps = config.total_steps;
  run.eval_interval = config.eval_interval;
  run.eval_episodes = config.eval_episodes;
  run.seed = seed;
  run.action_repeat = config.action_repeat;
  const std::vector<EvalPoint> evals = run_training(agent, *env, run);

  std::vector<EvalRecord> records;
  records.reserve(evals.size());
  for (const EvalPoint& p : evals) {
    records.push_back({seed, config.env, std::string(to_string(config.strategy)),
                       config.memory_size, p.step, p.mean_reward});
  }
  return records;
}

std::vector<EvalRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();

  std::vector<std::vector<EvalRecord>> per_seed(config.seeds.size());
  const std::size_t workers = thread_budget(config.seeds.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.seeds.size(); ++i)
      per_seed[i] = run_single(config, config.seeds[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= config.seeds.size()) return;
          per_seed[i] = run_single(config, config.seeds[i]);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<EvalRecord> records;
  for (auto& chunk : per_seed)
    records.insert(records.end(), chunk.begin(), chunk.end());
  std::stable_sort(records.begin(), records.end(),
                   [](const EvalRecord& a, const EvalRecord& b) {
                     return a.seed != b.seed ? a.seed < b.seed : a.step < b.step;
                   });
  return records;
}

void write_csv(const std::vector<EvalRecord>& records, std::ostream& out) {
  out << "seed,env,strategy,memory_size,step,mean_eval_reward\n";
  for (const EvalRecord& r : records) {
    out << r.seed << ',' << r.env << ',' << r.strategy << ',' << r.memory_size
        << ',' << r.step << ',' << format_double(r.mean_eval_reward) << '\n';
  }
}

void write_csv_file(const std::vector<EvalRecord>& records,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(records, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<EvalRecord> read_csv(std::istream& in) {
  std::vector<EvalRecord> records;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty CSV: missing header");
  if (line != "seed,env,strategy,memory_size,step,mean_eval_reward")
    throw std::runtime_error("unexpected CSV header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    EvalRecord r;
    std::getline(ss, field, ',');
    r.seed = std::stoull(field);
    std::getline(ss, r.env, ',');
    std::getline(ss, r.strategy, ',');
    std::getline(ss, field, ',');
    r.memory_size = std::stoull(field);
    std::getline(ss, field, ',');
    r.step = std::stoull(field);
    std::getline(ss, field, ',');
    r.mean_eval_reward = std::stod(field);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<EvalRecord> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_csv(in);
}

std::vector<AggregateRow> aggregate_final(const std::vector<EvalRecord>& records,
                                          std::size_t last_n) {
  // (env, strategy, memory_size) -> seed -> eval rewards in step order.
  std::map<std::tuple<std::string, std::string, std::size_t>,
           std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, double>>>>
      groups;
  for (const EvalRecord& r : records) {
    groups[{r.env, r.strategy, r.memory_size}][r.seed].push_back(
        {r.step, r.mean_eval_reward});
  }

  std::vector<AggregateRow> rows;
  for (auto& [group_key, seeds] : groups) {
    std::vector<double> per_seed_means;
    for (auto& [seed, evals] : seeds) {
      std::sort(evals.begin(), evals.end());
      if (evals.size() < last_n)
        throw std::runtime_error(
            "seed " + std::to_string(seed) + " has only " +
            std::to_string(evals.size()) + " evaluations, need " +
            std::to_string(last_n));
      double sum = 0.0;
      for (std::size_t i = evals.size() - last_n; i < evals.size(); ++i)
        sum += evals[i].second;
      per_seed_means.push_back(sum / static_cast<double>(last_n));
    }
    double mean = 0.0;
    for (double m : per_seed_means) mean += m;
    mean /= static_cast<double>(per_seed_means.size());
    double var = 0.0;
    for (double m : per_seed_means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(per_seed_means.size());

    AggregateRow row;
    row.env = std::get<0>(group_key);
    row.strategy = std::get<1>(group_key);
    row.memory_size = std::get<2>(group_key);
    row.seed_count = per_seed_means.size();
    row.mean = mean;
    row.stddev = std::sqrt(var);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_table(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "env         strategy  memory_size  seeds        mean       std\n";
  for (const AggregateRow& r : rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-11s %-9s %11zu %6zu %9.2f %9.2f\n",
                  r.env.c_str(), r.strategy.c_str(), r.memory_size,
                  r.seed_count, r.mean, r.stddev);
    out << line;
  }
  return out.str();
}

}  // namespace ecmem
