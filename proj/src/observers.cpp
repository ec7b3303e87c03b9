#include "obsim/observers.hpp"

#include "obsim/errors.hpp"

namespace obsim {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::BruteForce: return "brute-force";
    case Method::Indirect: return "indirect";
    case Method::SelfObservation: return "self";
    case Method::Survey: return "survey";
    case Method::Adaptive: return "adaptive";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "brute-force") return Method::BruteForce;
  if (name == "indirect") return Method::Indirect;
  if (name == "self") return Method::SelfObservation;
  if (name == "survey") return Method::Survey;
  if (name == "adaptive") return Method::Adaptive;
  return std::nullopt;
}

Observation observe_brute_force(const SimState& state, const Zone& zone) {
  int count = 0;
  const int n = state.agent_count();
  const auto& agents = state.agents();
  for (int id = 0; id < n; ++id) {
    const auto& a = agents[id];
    if (zone.contains(a.x, a.y)) ++count;
  }
  return {state.step_index(), static_cast<double>(count), Method::BruteForce,
          true};
}

Observation observe_indirect(const SimState& state, const Zone& zone) {
  if (&zone == &state.config().zone || zone == state.config().zone)
    return {state.step_index(), static_cast<double>(state.zone_occupancy()),
            Method::Indirect, true};
  if (!state.occupancy_tracked())
    throw ConfigError(
        "indirect observation: zone not registered for trace maintenance and "
        "per-cell occupancy counters are disabled");
  const auto& occupancy = state.occupancy();
  long count = 0;
  for (size_t cell = 0; cell < occupancy.size(); ++cell)
    if (zone.contains_index(static_cast<int>(cell))) count += occupancy[cell];
  return {state.step_index(), static_cast<double>(count), Method::Indirect,
          true};
}

Observation observe_self(const SimState& state) {
  if (!state.group_tracked())
    throw ConfigError("self observation requires group tracking");
  return {state.step_index(), static_cast<double>(state.group_size()),
          Method::SelfObservation, true};
}

Observation observe_survey(const SimState& state, const SurveyPlan& plan,
                           std::mt19937_64& obs_rng) {
  plan.validate();
  const int n_agents = state.agent_count();
  if (plan.n > n_agents)
    throw std::invalid_argument("survey sample larger than the population");
  const auto sample = srswor(n_agents, plan.n, obs_rng);
  const Zone& zone = state.config().zone;
  const auto& agents = state.agents();
  int hits = 0;
  for (int id : sample)
    if (zone.contains(agents[id].x, agents[id].y)) ++hits;
  return {state.step_index(), estimate_total(hits, plan.n, n_agents),
          Method::Survey, false};
}


}  // namespace obsim
