#pragma once

#include <map>
#include <string>

#include "obsim/sim.hpp"

namespace obsim {

// Plain-text "key = value" configuration, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_key_value_file(const std::string& path);
std::map<std::string, std::string> parse_key_value_text(const std::string& text);

// Builds a SimConfig from parsed keys (grid.width, grid.height, agents,
// steps, seed, zone.x0, zone.y0, zone.x1, zone.y1). Missing zone keys fall
// back to a 20%-coverage block; a missing seed falls back to OBS_MABS_SEED,
// then to 1.
SimConfig sim_config_from_keys(const std::map<std::string, std::string>& keys);

SimConfig load_sim_config(const std::string& path);
SimConfig default_sim_config();

}  // namespace obsim
