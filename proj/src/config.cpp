#include "ecmem/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ecmem/errors.hpp"

namespace ecmem {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::string section;
  std::size_t line_no = 0;
  std::stringstream ss{std::string(text)};
  std::string raw;
  while (std::getline(ss, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no),
                          "malformed section header: " + line);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no),
                        "expected `key = value`, got: " + line);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no), "empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    cfg.values_[full] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string ConfigFile::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "missing config key: " + key);
  return it->second;
}

std::int64_t ConfigFile::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError(key, "expected integer for " + key + ", got '" + v + "'");
  return out;
}

double ConfigFile::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected number for " + key + ", got '" + v + "'");
  }
}

bool ConfigFile::get_bool(const std::string& key) const {
  const std::string v = get_string(key);
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected on/off for " + key + ", got '" + v + "'");
}

ExperimentConfig experiment_from_config(const ConfigFile& file) {
  static const std::vector<std::string> known = {
      "experiment.env",           "experiment.strategy",
      "experiment.memory_size",   "experiment.total_steps",
      "experiment.eval_interval", "experiment.eval_episodes",
      "experiment.seeds",         "agent.k",
      "agent.delta",              "agent.lambda",
      "agent.epsilon_initial",    "agent.epsilon_final",
      "agent.epsilon_anneal_start", "agent.epsilon_anneal_end",
      "agent.projection",         "agent.projection_key_size",
      "agent.backend",            "agent.action_repeat"};
  for (const auto& [key, value] : file.values()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(key, "unknown config key: " + key);
  }

  ExperimentConfig cfg;
  if (file.has("experiment.env")) cfg.env = file.get_string("experiment.env");
  if (file.has("experiment.strategy")) {
    const std::string s = file.get_string("experiment.strategy");
    const auto strategy = strategy_from_string(s);
    if (!strategy)
      throw ConfigError("experiment.strategy",
                        "unknown strategy '" + s +
                            "' (expected lru, rew, sur, km or dkm)");
    cfg.strategy = *strategy;
  }
  if (file.has("experiment.memory_size"))
    cfg.memory_size = static_cast<std::size_t>(file.get_int("experiment.memory_size"));
  if (file.has("experiment.total_steps"))
    cfg.total_steps = static_cast<std::uint64_t>(file.get_int("experiment.total_steps"));
  if (file.has("experiment.eval_interval"))
    cfg.eval_interval = static_cast<std::uint64_t>(file.get_int("experiment.eval_interval"));
  if (file.has("experiment.eval_episodes"))
    cfg.eval_episodes = static_cast<int>(file.get_int("experiment.eval_episodes"));
  if (file.has("experiment.seeds")) {
    const std::string raw = file.get_string("experiment.seeds");
    cfg.seeds.clear();
    if (raw.find(',') == std::string::npos) {
      const std::int64_t count = file.get_int("experiment.seeds");
      if (count < 1)
        throw ConfigError("experiment.seeds", "seed count must be >= 1");
      for (std::int64_t s = 0; s < count; ++s)
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    } else {
      for (const std::string& part : split(raw, ',')) {
        if (part.empty()) continue;
        std::uint64_t s = 0;
        const auto [ptr, ec] =
            std::from_chars(part.data(), part.data() + part.size(), s);
        if (ec != std::errc{} || ptr != part.data() + part.size())
          throw ConfigError("experiment.seeds", "bad seed '" + part + "'");
        cfg.seeds.push_back(s);
      }
    }
  }

  if (file.has("agent.k")) cfg.kernel.k = static_cast<int>(file.get_int("agent.k"));
  if (file.has("agent.delta")) cfg.kernel.delta = file.get_double("agent.delta");
  if (file.has("agent.lambda")) cfg.lambda = file.get_double("agent.lambda");
  if (file.has("agent.epsilon_initial"))
    cfg.epsilon.initial = file.get_double("agent.epsilon_initial");
  if (file.has("agent.epsilon_final"))
    cfg.epsilon.final_value = file.get_double("agent.epsilon_final");
  if (file.has("agent.epsilon_anneal_start"))
    cfg.epsilon.anneal_start =
        static_cast<std::uint64_t>(file.get_int("agent.epsilon_anneal_start"));
  if (file.has("agent.epsilon_anneal_end"))
    cfg.epsilon.anneal_end =
        static_cast<std::uint64_t>(file.get_int("agent.epsilon_anneal_end"));
  if (file.has("agent.projection")) cfg.projection = file.get_bool("agent.projection");
  if (file.has("agent.projection_key_size"))
    cfg.projection_dim =
        static_cast<std::size_t>(file.get_int("agent.projection_key_size"));
  if (file.has("agent.action_repeat")) {
    const std::string raw = file.get_string("agent.action_repeat");
    if (raw == "auto") {
      cfg.action_repeat = 0;
    } else {
      cfg.action_repeat = static_cast<int>(file.get_int("agent.action_repeat"));
      if (cfg.action_repeat < 1)
        throw ConfigError("agent.action_repeat",
                          "action_repeat must be >= 1 or 'auto'");
    }
  }
  if (file.has("agent.backend")) {
    const std::string b = file.get_string("agent.backend");
    const auto backend = backend_from_string(b);
    if (!backend)
      throw ConfigError("agent.backend",
                        "unknown backend '" + b +
                            "' (expected naive or spatial-tree)");
    cfg.backend = *backend;
  }
  return cfg;
}

}  // namespace ecmem
