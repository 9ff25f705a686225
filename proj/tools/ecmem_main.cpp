// Command-line front end: `run` trains MFEC agents over seeds and writes the
// evaluation CSV, `table` aggregates a CSV into the final-report table,
// `stream-study` runs the synthetic-stream storage comparison.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ecmem/analysis.hpp"
#include "ecmem/config.hpp"
#include "ecmem/errors.hpp"
#include "ecmem/harness.hpp"

namespace {

constexpr int kConfigErrorExit = 2;

void write_snapshots_csv(const std::vector<ecmem::CentroidSnapshot>& snapshots,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "method,fraction,x,y,n\n";
  for (const auto& snap : snapshots) {
    for (std::size_t i = 0; i < snap.centroids.size(); ++i) {
      out << snap.method << ',' << snap.fraction << ','
          << snap.centroids[i][0] << ',' << snap.centroids[i][1] << ','
          << snap.counts[i] << '\n';
    }
  }
}

void write_density_csv(const ecmem::DensityGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (int yi = 0; yi < grid.resolution; ++yi) {
    for (int xi = 0; xi < grid.resolution; ++xi) {
      if (xi > 0) out << ',';
      out << grid.values[static_cast<std::size_t>(yi) * grid.resolution + xi];
    }
    out << '\n';
  }
}

int run_command(const std::string& config_path, const std::string& env,
                const std::string& strategy, std::int64_t memory_size,
                std::int64_t seeds, std::int64_t steps,
                const std::string& out_path) {
  ecmem::ExperimentConfig cfg;
  if (!config_path.empty())
    cfg = ecmem::experiment_from_config(ecmem::ConfigFile::parse_file(config_path));
  if (!env.empty()) cfg.env = env;
  if (!strategy.empty()) {
    const auto parsed = ecmem::strategy_from_string(strategy);
    if (!parsed)
      throw ecmem::ConfigError("strategy", "unknown strategy '" + strategy +
                                               "' (expected lru, rew, sur, km "
                                               "or dkm)");
    cfg.strategy = *parsed;
  }
  if (memory_size >= 0) cfg.memory_size = static_cast<std::size_t>(memory_size);
  if (seeds >= 0) {
    if (seeds < 1) throw ecmem::ConfigError("seeds", "seed count must be >= 1");
    cfg.seeds.clear();
    for (std::int64_t s = 0; s < seeds; ++s)
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  if (steps >= 0) cfg.total_steps = static_cast<std::uint64_t>(steps);
  cfg.validate();

  const auto records = ecmem::run_experiment(cfg);
  if (out_path.empty() || out_path == "-") {
    ecmem::write_csv(records, std::cout);
  } else {
    ecmem::write_csv_file(records, out_path);
    std::cerr << "wrote " << records.size() << " records to " << out_path
              << "\n";
  }
  return 0;
}

int table_command(const std::string& in_path, std::int64_t last_n) {
  const auto records = ecmem::read_csv_file(in_path);
  const auto rows =
      ecmem::aggregate_final(records, static_cast<std::size_t>(last_n));
  std::cout << ecmem::format_table(rows);
  return 0;
}

int stream_study_command(std::int64_t memory_size, std::uint64_t seed,
                         const std::string& out_dir) {
  ecmem::StreamSpec spec;
  spec.seed = seed;
  const auto snapshots =
      ecmem::stream_study(spec, static_cast<std::size_t>(memory_size));
  const auto box = ecmem::skew_phase_box(spec);

  std::filesystem::create_directories(out_dir);
  write_snapshots_csv(snapshots, out_dir + "/snapshots.csv");

  const auto stream = ecmem::synthetic_stream(spec);
  std::array<double, 2> lo{stream[0][0], stream[0][1]};
  std::array<double, 2> hi = lo;
  for (const auto& p : stream) {
    lo = {std::min(lo[0], p[0]), std::min(lo[1], p[1])};
    hi = {std::max(hi[0], p[0]), std::max(hi[1], p[1])};
  }
  const std::array<double, 2> pad{0.05 * (hi[0] - lo[0]), 0.05 * (hi[1] - lo[1])};
  lo = {lo[0] - pad[0], lo[1] - pad[1]};
  hi = {hi[0] + pad[0], hi[1] + pad[1]};

  std::cout << "phase-2 box: x [" << box[0][0] << ", " << box[0][1] << "], y ["
            << box[1][0] << ", " << box[1][1] << "]\n";
  for (const auto& snap : snapshots) {
    if (snap.fraction != 1.0) continue;
    const auto grid =
        ecmem::kde_grid(snap.centroids, snap.counts, 64, lo, hi);
    write_density_csv(grid, out_dir + "/density_" + snap.method + ".csv");
    std::cout << snap.method << ": " << snap.centroids.size()
              << " centroids, fraction in phase-2 box = "
              << ecmem::fraction_in_box(snap, box) << "\n";
  }
  std::cerr << "wrote snapshots.csv and density_*.csv to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded episodic-control memory experiments"};
  app.require_subcommand(1);

  std::string config_path, env, strategy, out_path = "results.csv";
  std::int64_t memory_size = -1, seeds = -1, steps = -1;
  auto* run = app.add_subcommand("run", "Train agents and write the eval CSV");
  run->add_option("--config", config_path, "Config file (key = value, [section] headers)");
  run->add_option("--env", env, "cartpole | acrobot | openroom | fourroom");
  run->add_option("--strategy", strategy, "lru | rew | sur | km | dkm");
  run->add_option("--memory-size", memory_size, "Memory capacity per action");
  run->add_option("--seeds", seeds, "Number of seeds (0..n-1)");
  run->add_option("--steps", steps, "Training steps");
  run->add_option("--out", out_path, "Output CSV path ('-' for stdout)");

  std::string table_in;
  std::int64_t last_n = 10;
  auto* table = app.add_subcommand("table", "Aggregate a CSV into the final table");
  table->add_option("--in", table_in, "Input CSV")->required();
  table->add_option("--last", last_n, "Evaluations per seed to average");

  std::int64_t study_memory = 50;
  std::uint64_t study_seed = 1;
  std::string study_out = "stream-study";
  auto* study = app.add_subcommand(
      "stream-study", "Storage-strategy comparison on the synthetic stream");
  study->add_option("--memory-size", study_memory, "Store capacity");
  study->add_option("--seed", study_seed, "Stream seed");
  study->add_option("--out-dir", study_out, "Output directory");

  try {
    app.parse(argc, argv);
    if (run->parsed())
      return run_command(config_path, env, strategy, memory_size, seeds, steps,
                         out_path);
    if (table->parsed()) return table_command(table_in, last_n);
    if (study->parsed())
      return stream_study_command(study_memory, study_seed, study_out);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigErrorExit;
  } catch (const ecmem::ConfigError& e) {
    std::cerr << "config error (" << e.field() << "): " << e.what() << "\n";
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
