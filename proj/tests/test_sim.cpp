#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "obsim/sim.hpp"

using namespace obsim;

namespace {

SimConfig small_config(int agents, std::uint64_t seed) {
  SimConfig cfg;
  cfg.grid = {100, 100};
  cfg.zone = Zone::rect(cfg.grid, 10, 10, 39, 29);
  cfg.agents = agents;
  cfg.seed = seed;
  return cfg;
}

long occupancy_sum(const SimState& state) {
  const auto& occ = state.occupancy();
  return std::accumulate(occ.begin(), occ.end(), 0L);
}

}  // namespace

TEST_CASE("grid validation and wrap") {
  CHECK_THROWS_AS((GridSpec{0, 10}.validate()), ConfigError);
  CHECK_THROWS_AS((GridSpec{10, 0}.validate()), ConfigError);

  const GridSpec grid{100, 100};
  // torus wrap: step (-1,-1) from the origin
  CHECK(grid.wrap(0 - 1, 0 - 1) == std::pair{99, 99});
  CHECK(grid.wrap(100, 100) == std::pair{0, 0});
  CHECK(grid.wrap(5, 99) == std::pair{5, 99});
}

TEST_CASE("moore offsets exclude stay") {
  auto offsets = moore_offsets();
  CHECK(offsets.size() == 8);
  for (const auto& off : offsets) CHECK((off[0] != 0 || off[1] != 0));
}

TEST_CASE("zone construction") {
  const GridSpec grid{100, 100};
  const Zone z = Zone::rect(grid, 0, 0, 49, 39);
  CHECK(z.cell_count() == 2000);
  CHECK(z.coverage() == doctest::Approx(0.2));
  CHECK(z.contains(0, 0));
  CHECK(z.contains(49, 39));
  CHECK_FALSE(z.contains(50, 39));

  CHECK_THROWS_AS(Zone::rect(grid, 0, 0, 100, 10), ConfigError);
  CHECK_THROWS_AS(Zone::rect(grid, 5, 5, 4, 9), ConfigError);

  CHECK(Zone::with_coverage(grid, 0.2).cell_count() == 2000);
  CHECK(Zone::with_coverage(grid, 0.0).cell_count() == 0);
  CHECK(Zone::with_coverage(grid, 1.0).cell_count() == 10000);
  CHECK(Zone::full(grid).cell_count() == 10000);
  CHECK(Zone::none(grid).cell_count() == 0);
}

TEST_CASE("init: single agent on a 1x1 grid") {
  SimConfig cfg;
  cfg.grid = {1, 1};
  cfg.zone = Zone::full(cfg.grid);
  cfg.agents = 1;
  cfg.seed = 5;
  const SimState state(cfg);
  CHECK(state.agents()[0].x == 0);
  CHECK(state.agents()[0].y == 0);
  CHECK(state.occupancy()[0] == 1);
  CHECK(state.zone_occupancy() == 1);
  CHECK(state.step_index() == 0);
}

TEST_CASE("init: full-grid zone forces Z = N") {
  SimConfig cfg = small_config(4, 11);
  cfg.zone = Zone::full(cfg.grid);
  const SimState state(cfg);
  CHECK(state.zone_occupancy() == 4);
  CHECK(ground_truth_count(state, cfg.zone) == 4);
}

TEST_CASE("init rejects bad configs") {
  SimConfig cfg = small_config(0, 1);
  CHECK_THROWS_AS(SimState{cfg}, ConfigError);
  cfg = small_config(10, 1);
  cfg.grid = {0, 100};
  CHECK_THROWS_AS(SimState{cfg}, ConfigError);
  cfg = small_config(10, 1);
  cfg.zone = Zone::rect(GridSpec{50, 50}, 0, 0, 9, 9);  // wrong grid
  CHECK_THROWS_AS(SimState{cfg}, ConfigError);
}

TEST_CASE("init: uniform placement matches the binomial oracle") {
  // zone covers 2000 of 10000 cells; initial Z ~ Binomial(N, 0.2)
  const int n_agents = 10000;
  const int seeds = 200;
  double total = 0;
  for (int s = 0; s < seeds; ++s) {
    SimConfig cfg = small_config(n_agents, 1000 + s);
    cfg.zone = Zone::with_coverage(cfg.grid, 0.2);
    total += SimState(cfg).zone_occupancy();
  }
  const double mean = total / seeds;
  const double sigma = std::sqrt(n_agents * 0.2 * 0.8);
  CHECK(std::abs(mean - 2000.0) < 3.0 * sigma);
}

TEST_CASE("frozen-state construction") {
  SimConfig cfg = small_config(3, 1);
  std::vector<AgentState> pos = {{0, 0}, {5, 5}, {99, 99}};
  const Zone z = Zone::from_cells(cfg.grid, {{0, 0}, {5, 5}});
  const SimState state(cfg, pos);
  CHECK(ground_truth_count(state, z) == 2);
  CHECK(ground_truth_count(state, Zone::none(cfg.grid)) == 0);
  CHECK(ground_truth_count(state, Zone::full(cfg.grid)) == 3);

  std::vector<AgentState> bad = {{0, 0}, {5, 5}, {100, 0}};
  CHECK_THROWS_AS(SimState(cfg, bad), ConfigError);
}

TEST_CASE("conservation and incremental consistency") {
  std::mt19937_64 meta(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int n_agents = 1 + static_cast<int>(meta() % 1000);
    SimConfig cfg = small_config(n_agents, meta());
    SimState state(cfg);
    for (int s = 0; s < 100; ++s) {
      state.step();
      REQUIRE(occupancy_sum(state) == n_agents);
      REQUIRE(state.zone_occupancy() == ground_truth_count(state, cfg.zone));
      for (const auto& a : state.agents()) {
        REQUIRE(a.x >= 0);
        REQUIRE(a.x < cfg.grid.width);
        REQUIRE(a.y >= 0);
        REQUIRE(a.y < cfg.grid.height);
      }
    }
    CHECK(state.step_index() == 100);
  }
}

TEST_CASE("determinism: identical config gives identical trajectories") {
  const SimConfig cfg = small_config(500, 2024);
  SimState a(cfg);
  SimState b(cfg);
  for (int s = 0; s < 50; ++s) {
    a.step();
    b.step();
    REQUIRE(a.position_hash() == b.position_hash());
    REQUIRE(a.zone_occupancy() == b.zone_occupancy());
  }
}

TEST_CASE("uniform mixing: long-run time average of Z/N matches coverage") {
  SimConfig cfg = small_config(10000, 314159);
  cfg.zone = Zone::with_coverage(cfg.grid, 0.2);
  SimState state(cfg);
  double sum = 0;
  const int steps = 10000;
  for (int s = 0; s < steps; ++s) {
    state.step();
    sum += static_cast<double>(state.zone_occupancy()) / cfg.agents;
  }
  CHECK(std::abs(sum / steps - 0.2) < 0.01);
}
