#pragma once

#include <map>
#include <string>
#include <string_view>

#include "ecmem/harness.hpp"

namespace ecmem {

// Flat `key = value` config files with `[section]` headers and `#` comments.
// Keys are stored as "section.key"; unknown keys are rejected when applied.
class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text);
  static ConfigFile parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

// Builds an ExperimentConfig from a config file (every field optional,
// defaults as in ExperimentConfig). Recognized keys:
//   [experiment] env, strategy, memory_size, total_steps, eval_interval,
//                eval_episodes, seeds
//   [agent]      k, delta, lambda, epsilon_initial, epsilon_final,
//                epsilon_anneal_start, epsilon_anneal_end, projection,
//                projection_key_size, backend
// `seeds` is either a count ("5" -> seeds 0..4) or an explicit comma list.
ExperimentConfig experiment_from_config(const ConfigFile& file);

}  // namespace ecmem
