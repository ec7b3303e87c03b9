#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "obsim/sampling.hpp"
#include "obsim/sim.hpp"

namespace obsim {

enum class Method {
  BruteForce,
  Indirect,
  SelfObservation,
  Survey,
  Adaptive,
};

std::string_view to_string(Method method);

// Recognizes the CLI / file spellings ("brute-force", "indirect", "self",
// "survey", "adaptive"); nullopt for anything else.
std::optional<Method> parse_method(std::string_view name);

// One recorded observation of Z (exact count or estimate).
struct Observation {
  long step = 0;
  double value = 0.0;
  Method method = Method::BruteForce;
  bool exact = true;
  std::optional<std::int64_t> elapsed_ns;
  std::optional<Method> delegate;  // set when method == Adaptive
};

// Full scan of all N agents testing zone membership.
Observation observe_brute_force(const SimState& state, const Zone& zone);

// Reads the environment trace, never the agents. For the configured zone
// this is the incrementally maintained count; for any other zone it sums
// per-cell occupancy counters. Throws ConfigError when neither trace exists.
Observation observe_indirect(const SimState& state, const Zone& zone);

// Reads |G|. Requires group tracking to have run since initialization.
Observation observe_self(const SimState& state);

// Draws a without-replacement sample and expands the in-zone hit count.
Observation observe_survey(const SimState& state, const SurveyPlan& plan,
                           std::mt19937_64& obs_rng);

// The rule set R of the self-observation method, evaluated per agent after
// it moves: join G iff in the zone and absent, leave iff out and present.
// Runs once per agent per step, so it is kept inline and branch-free; the
// unconditional store is a no-op when membership is unchanged.
inline void apply_membership_rules(const AgentState& agent, int id,
                                   const Zone& zone,
                                   std::vector<std::uint8_t>& group,
                                   int& group_size) {
  const std::uint8_t in_zone = zone.contains(agent.x, agent.y) ? 1 : 0;
  group_size += static_cast<int>(in_zone) - static_cast<int>(group[id]);
  group[id] = in_zone;
}

}  // namespace obsim
