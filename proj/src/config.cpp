#include "obsim/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace obsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

long get_long(const std::map<std::string, std::string>& keys,
              const std::string& key, long fallback) {
  auto it = keys.find(key);
  if (it == keys.end()) return fallback;
  try {
    size_t pos = 0;
    const long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": " + it->second);
  }
}

std::uint64_t default_seed() {
  // Global fallback; explicit config/flags take precedence.
  if (const char* env = std::getenv("OBS_MABS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("OBS_MABS_SEED is not an integer");
    }
  }
  return 1;
}

}  // namespace

std::map<std::string, std::string> parse_key_value_text(const std::string& text) {
  std::map<std::string, std::string> keys;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key on line " +
                                       std::to_string(lineno));
    keys[key] = value;
  }
  return keys;
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_value_text(buf.str());
}

SimConfig sim_config_from_keys(const std::map<std::string, std::string>& keys) {
  SimConfig cfg;
  cfg.grid.width = static_cast<int>(get_long(keys, "grid.width", 100));
  cfg.grid.height = static_cast<int>(get_long(keys, "grid.height", 100));
  cfg.grid.validate();
  cfg.agents = static_cast<int>(get_long(keys, "agents", 1000));
  cfg.steps = static_cast<int>(get_long(keys, "steps", 1000));
  cfg.seed = static_cast<std::uint64_t>(
      get_long(keys, "seed", static_cast<long>(default_seed())));

  const bool any_zone_key = keys.count("zone.x0") || keys.count("zone.y0") ||
                            keys.count("zone.x1") || keys.count("zone.y1");
  if (any_zone_key) {
    const int x0 = static_cast<int>(get_long(keys, "zone.x0", 0));
    const int y0 = static_cast<int>(get_long(keys, "zone.y0", 0));
    const int x1 = static_cast<int>(get_long(keys, "zone.x1", cfg.grid.width - 1));
    const int y1 = static_cast<int>(get_long(keys, "zone.y1", cfg.grid.height - 1));
    cfg.zone = Zone::rect(cfg.grid, x0, y0, x1, y1);
  } else {
    cfg.zone = Zone::with_coverage(cfg.grid, 0.2);
  }
  cfg.validate();
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  return sim_config_from_keys(parse_key_value_file(path));
}

SimConfig default_sim_config() { return sim_config_from_keys({}); }

}  // namespace obsim
