#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "obsim/grid.hpp"

namespace obsim {

// One agent of the random-walk population. The id is the index in the
// population array.
struct AgentState {
  std::int32_t x = 0;
  std::int32_t y = 0;
};

struct SimConfig {
  GridSpec grid;
  Zone zone;
  int agents = 1000;
  int steps = 1000;
  std::uint64_t seed = 1;

  // Per-cell occupancy counters, the trace read by indirect observation of
  // arbitrary zones. The zone configured above is always traced.
  bool track_occupancy = true;

  // Maintain the self-observation group G while stepping. Required before
  // observe_self is usable.
  bool track_group = true;

  void validate() const;
};

// The 8 Moore neighborhood offsets ("stay" excluded).
std::span<const std::array<int, 2>, 8> moore_offsets();

// Full simulation state: agent positions, environment traces, group G.
class SimState {
 public:
  // init_simulation: N agents placed uniformly at random over the grid.
  explicit SimState(const SimConfig& config);

  // Frozen-state construction from explicit positions (testing / analysis).
  SimState(const SimConfig& config, std::vector<AgentState> positions);

  // Moves every agent to a uniformly chosen Moore neighbor (toroidal wrap),
  // maintaining occupancy traces and group membership incrementally.
  void step();

  const SimConfig& config() const { return cfg_; }
  int agent_count() const { return static_cast<int>(agents_.size()); }
  const std::vector<AgentState>& agents() const { return agents_; }

  // Per-cell counters; empty when track_occupancy is off.
  const std::vector<std::int32_t>& occupancy() const { return occupancy_; }
  bool occupancy_tracked() const { return !occupancy_.empty(); }

  // Incrementally maintained count of agents in the configured zone.
  int zone_occupancy() const { return zone_occupancy_; }

  bool group_tracked() const { return !group_.empty(); }
  int group_size() const { return group_size_; }
  bool in_group(int id) const { return group_[id] != 0; }
  const std::vector<std::uint8_t>& group_mask() const { return group_; }

  long step_index() const { return step_index_; }

  // FNV-1a over all agent positions; used for trajectory comparisons.
  std::uint64_t position_hash() const;

 private:
  friend void apply_membership_rules(const AgentState&, int, const Zone&,
                                     std::vector<std::uint8_t>&, int&);
  void rebuild_counters();

  SimConfig cfg_;
  std::vector<AgentState> agents_;
  std::vector<std::int32_t> occupancy_;
  std::vector<std::uint8_t> group_;
  int zone_occupancy_ = 0;
  int group_size_ = 0;
  long step_index_ = 0;
  std::mt19937_64 rng_;
};

// Reference value Z by full enumeration. This is the oracle every observer
// is checked against; it never reads the incremental counters.
int ground_truth_count(const SimState& state, const Zone& zone);

}  // namespace obsim
