#include "obsim/sim.hpp"

#include "obsim/observers.hpp"

namespace obsim {

namespace {

constexpr std::array<std::array<int, 2>, 8> kMooreOffsets = {{
    {-1, -1}, {0, -1}, {1, -1},
    {-1, 0},           {1, 0},
    {-1, 1},  {0, 1},  {1, 1},
}};

}  // namespace

std::span<const std::array<int, 2>, 8> moore_offsets() { return kMooreOffsets; }

void SimConfig::validate() const {
  grid.validate();
  if (agents < 1) throw ConfigError("agent count must be >= 1");
  if (steps < 1) throw ConfigError("step count must be >= 1");
  if (!zone.bound()) throw ConfigError("no zone configured");
  if (zone.grid_width() != grid.width || zone.grid_height() != grid.height)
    throw ConfigError("zone was built for a different grid");
}

SimState::SimState(const SimConfig& config) : cfg_(config), rng_(config.seed) {
  cfg_.validate();
  agents_.resize(cfg_.agents);
  std::uniform_int_distribution<int> cell(0, cfg_.grid.cell_count() - 1);
  for (auto& a : agents_) {
    const int c = cell(rng_);
    a.x = c % cfg_.grid.width;
    a.y = c / cfg_.grid.width;
  }
  rebuild_counters();
}

SimState::SimState(const SimConfig& config, std::vector<AgentState> positions)
    : cfg_(config), rng_(config.seed) {
  cfg_.validate();
  if (static_cast<int>(positions.size()) != cfg_.agents)
    throw ConfigError("position list does not match the configured agent count");
  for (const auto& a : positions)
    if (a.x < 0 || a.y < 0 || a.x >= cfg_.grid.width || a.y >= cfg_.grid.height)
      throw ConfigError("agent position outside the grid");
  agents_ = std::move(positions);
  rebuild_counters();
}

void SimState::rebuild_counters() {
  zone_occupancy_ = 0;
  group_size_ = 0;
  if (cfg_.track_occupancy) occupancy_.assign(cfg_.grid.cell_count(), 0);
  if (cfg_.track_group) group_.assign(agents_.size(), 0);
  for (size_t id = 0; id < agents_.size(); ++id) {
    const auto& a = agents_[id];
    if (!occupancy_.empty()) ++occupancy_[cfg_.grid.cell_index(a.x, a.y)];
    if (cfg_.zone.contains(a.x, a.y)) ++zone_occupancy_;
    if (!group_.empty())
      apply_membership_rules(a, static_cast<int>(id), cfg_.zone, group_, group_size_);
  }
}

void SimState::step() {
  const Zone& zone = cfg_.zone;
  const GridSpec& grid = cfg_.grid;
  std::uniform_int_distribution<int> dir(0, 7);
  const bool occ = !occupancy_.empty();
  const bool grp = !group_.empty();
  const int n = static_cast<int>(agents_.size());
  for (int id = 0; id < n; ++id) {
    AgentState& a = agents_[id];
    const auto& off = kMooreOffsets[dir(rng_)];
    const auto [nx, ny] = grid.wrap(a.x + off[0], a.y + off[1]);
    if (occ) {
      --occupancy_[grid.cell_index(a.x, a.y)];
      ++occupancy_[grid.cell_index(nx, ny)];
    }
    const int now_in = static_cast<int>(zone.contains(nx, ny));
    zone_occupancy_ += now_in - static_cast<int>(zone.contains(a.x, a.y));
    a.x = nx;
    a.y = ny;
    if (grp) {
      // rule set R (see apply_membership_rules), reusing the membership
      // test already computed for the zone counter
      group_size_ += now_in - static_cast<int>(group_[id]);
      group_[id] = static_cast<std::uint8_t>(now_in);
    }
  }
  ++step_index_;
}

std::uint64_t SimState::position_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (const auto& a : agents_) {
    mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(a.x)));
    mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(a.y)));
  }
  return h;
}

int ground_truth_count(const SimState& state, const Zone& zone) {
  int count = 0;
  for (const auto& a : state.agents())
    if (zone.contains(a.x, a.y)) ++count;
  return count;
}

}  // namespace obsim
