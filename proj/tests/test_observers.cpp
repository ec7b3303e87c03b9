#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "obsim/observers.hpp"

using namespace obsim;

namespace {

SimConfig case_config(int agents, std::uint64_t seed, double coverage = 0.2) {
  SimConfig cfg;
  cfg.grid = {100, 100};
  cfg.zone = Zone::with_coverage(cfg.grid, coverage);
  cfg.agents = agents;
  cfg.seed = seed;
  return cfg;
}

// N agents with exactly `in_zone` of them inside the 20%-coverage zone
// (rows 0..19 of the grid).
SimState frozen_state(int agents, int in_zone) {
  SimConfig cfg = case_config(agents, 1);
  std::vector<AgentState> pos(agents);
  for (int i = 0; i < agents; ++i) {
    if (i < in_zone)
      pos[i] = {i % 100, (i / 100) % 20};
    else
      pos[i] = {i % 100, 20 + (i / 100) % 80};
  }
  return SimState(cfg, std::move(pos));
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (Method m : {Method::BruteForce, Method::Indirect,
                   Method::SelfObservation, Method::Survey, Method::Adaptive})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_FALSE(parse_method("nope").has_value());
}

TEST_CASE("brute force: empty and full zones") {
  const SimConfig cfg = case_config(250, 3);
  const SimState state(cfg);
  CHECK(observe_brute_force(state, Zone::none(cfg.grid)).value == 0.0);
  CHECK(observe_brute_force(state, Zone::full(cfg.grid)).value == 250.0);
  const auto obs = observe_brute_force(state, cfg.zone);
  CHECK(obs.exact);
  CHECK(obs.method == Method::BruteForce);
}

TEST_CASE("indirect: trace fast path and per-cell fallback") {
  const SimConfig cfg = case_config(300, 4);
  SimState state(cfg);
  for (int s = 0; s < 10; ++s) state.step();

  CHECK(observe_indirect(state, state.config().zone).value ==
        ground_truth_count(state, cfg.zone));
  CHECK(observe_indirect(state, Zone::none(cfg.grid)).value == 0.0);

  // all agents in one in-zone cell
  SimConfig one = case_config(7, 5);
  const SimState packed(one, std::vector<AgentState>(7, {0, 0}));
  CHECK(observe_indirect(packed, one.zone).value == 7.0);

  // arbitrary zone via per-cell counters
  const Zone other = Zone::rect(cfg.grid, 30, 30, 69, 69);
  CHECK(observe_indirect(state, other).value ==
        ground_truth_count(state, other));

  // counters disabled and zone not the traced one -> configuration error
  SimConfig bare = case_config(300, 4);
  bare.track_occupancy = false;
  SimState lean(bare);
  CHECK(observe_indirect(lean, bare.zone).value ==
        ground_truth_count(lean, bare.zone));
  CHECK_THROWS_AS(observe_indirect(lean, other), ConfigError);
}

TEST_CASE("membership rules: join, leave, idempotence") {
  const GridSpec grid{100, 100};
  const Zone zone = Zone::rect(grid, 0, 0, 9, 9);
  std::vector<std::uint8_t> group(3, 0);
  int size = 0;

  const AgentState inside{5, 5};
  const AgentState outside{50, 50};

  // in zone, not in G -> joins
  apply_membership_rules(inside, 0, zone, group, size);
  CHECK(group[0] == 1);
  CHECK(size == 1);

  // in zone, already in G -> unchanged
  apply_membership_rules(inside, 0, zone, group, size);
  CHECK(group[0] == 1);
  CHECK(size == 1);

  // not in zone, in G -> leaves
  apply_membership_rules(outside, 0, zone, group, size);
  CHECK(group[0] == 0);
  CHECK(size == 0);

  // not in zone, not in G -> unchanged
  apply_membership_rules(outside, 1, zone, group, size);
  CHECK(group[1] == 0);
  CHECK(size == 0);
}

TEST_CASE("self observation: trivial zones") {
  SimConfig cfg = case_config(123, 9);
  cfg.zone = Zone::full(cfg.grid);
  CHECK(observe_self(SimState(cfg)).value == 123.0);
  cfg.zone = Zone::none(cfg.grid);
  CHECK(observe_self(SimState(cfg)).value == 0.0);

  cfg = case_config(10, 9);
  cfg.track_group = false;
  CHECK_THROWS_AS(observe_self(SimState(cfg)), ConfigError);
}

TEST_CASE("exact-observer equivalence over stepped runs") {
  std::mt19937_64 meta(2025);
  for (int trial = 0; trial < 20; ++trial) {
    const int n_agents = 1 + static_cast<int>(meta() % 1000);
    SimConfig cfg = case_config(n_agents, meta());
    SimState state(cfg);
    for (int s = 0; s < 100; ++s) {
      state.step();
      const int truth = ground_truth_count(state, cfg.zone);
      REQUIRE(observe_brute_force(state, cfg.zone).value == truth);
      REQUIRE(observe_indirect(state, cfg.zone).value == truth);
      REQUIRE(observe_self(state).value == truth);
    }
  }
}

TEST_CASE("group minimality: G is exactly the in-zone set") {
  SimConfig cfg = case_config(400, 31);
  SimState state(cfg);
  for (int s = 0; s < 25; ++s) state.step();
  for (int id = 0; id < state.agent_count(); ++id) {
    const auto& a = state.agents()[id];
    REQUIRE(state.in_group(id) == cfg.zone.contains(a.x, a.y));
  }
  // removing any member or adding any non-member breaks |G| == Z
  CHECK(state.group_size() == ground_truth_count(state, cfg.zone));
}

TEST_CASE("survey: census and empty-zone cases") {
  std::mt19937_64 rng(5);
  const SimConfig cfg = case_config(200, 6);
  SimState state(cfg);
  for (int s = 0; s < 5; ++s) state.step();

  SurveyPlan census;
  census.n = 200;
  census.population = 200;
  census.d = 0.08;
  census.p_expected = 0.2;
  const auto obs = observe_survey(state, census, rng);
  CHECK(obs.value == ground_truth_count(state, cfg.zone));
  CHECK_FALSE(obs.exact);

  SimConfig empty_cfg = case_config(200, 6, 0.0);
  SimState empty_state(empty_cfg);
  const auto plan = SurveyPlan::make(200, 0.2, 0.08);
  for (int i = 0; i < 20; ++i)
    CHECK(observe_survey(empty_state, plan, rng).value == 0.0);
}

TEST_CASE("survey: error coverage at the case-study design point") {
  // frozen state, N = 10000, Z = 2000, d = 0.08
  const SimState state = frozen_state(10000, 2000);
  REQUIRE(ground_truth_count(state, state.config().zone) == 2000);

  const auto plan = SurveyPlan::make(10000, 0.2, 0.08);
  REQUIRE(plan.n == 100);

  std::mt19937_64 rng(88);
  int within = 0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const double est = observe_survey(state, plan, rng).value;
    if (std::abs(est / 10000.0 - 0.2) <= 0.08) ++within;
  }
  // nominal coverage ~95% from the factor 4 in the sizing formula
  CHECK(within >= 930);
}

TEST_CASE("survey: unbiasedness over repeated samples") {
  const SimState state = frozen_state(10000, 2000);
  const auto plan = SurveyPlan::make(10000, 0.2, 0.08);
  std::mt19937_64 rng(4242);

  const int draws = 10000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < draws; ++i) {
    const double est = observe_survey(state, plan, rng).value;
    sum += est;
    sum_sq += est * est;
  }
  const double mean = sum / draws;
  const double var = (sum_sq - sum * sum / draws) / (draws - 1);
  const double se = std::sqrt(var / draws);
  CHECK(std::abs(mean - 2000.0) < 3.0 * se);
}

TEST_CASE("non-perturbation: observers never touch the simulation stream") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    SimConfig cfg = case_config(300, seed);
    std::vector<std::uint64_t> hashes;
    // none, brute, indirect, self, survey
    for (int setting = 0; setting < 5; ++setting) {
      SimState state(cfg);
      std::mt19937_64 obs_rng(9000 + setting);
      const auto plan = SurveyPlan::make(300, 0.2, 0.08);
      std::uint64_t combined = 0;
      for (int s = 0; s < 50; ++s) {
        state.step();
        switch (setting) {
          case 1: observe_brute_force(state, cfg.zone); break;
          case 2: observe_indirect(state, cfg.zone); break;
          case 3: observe_self(state); break;
          case 4: observe_survey(state, plan, obs_rng); break;
          default: break;
        }
        combined ^= state.position_hash() + 0x9E3779B97F4A7C15ULL +
                    (combined << 6) + (combined >> 2);
      }
      hashes.push_back(combined);
    }
    for (size_t i = 1; i < hashes.size(); ++i) REQUIRE(hashes[i] == hashes[0]);
  }
}

TEST_CASE("filter soundness: samples are subsets of the id universe") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 50; ++trial) {
    const int n_pop = 1 + static_cast<int>(rng() % 500);
    const int n = 1 + static_cast<int>(rng() % n_pop);
    for (int id : srswor(n_pop, n, rng)) {
      REQUIRE(id >= 0);
      REQUIRE(id < n_pop);
    }
  }
}
