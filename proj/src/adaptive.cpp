#include "obsim/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace obsim {

namespace {

size_t nearest_index(const std::vector<double>& axis, double q) {
  size_t best = 0;
  double best_dist = std::abs(axis[0] - q);
  for (size_t i = 1; i < axis.size(); ++i) {
    const double dist = std::abs(axis[i] - q);
    if (dist < best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

constexpr double kRateSmoothing = 0.1;

}  // namespace

void AdaptivePolicy::validate() const {
  map.validate();
  if (switch_hysteresis < 0)
    throw std::invalid_argument("policy: hysteresis must be >= 0");
  if (fixed_p && (*fixed_p < 0.0 || *fixed_p > 1.0))
    throw std::invalid_argument("policy: rate must be in [0, 1]");
  if (!(survey_d > 0.0))
    throw std::invalid_argument("policy: survey_d must be > 0");
}

Method select_method(const CalibrationMap& map, double population, double p) {
  map.validate();
  const size_t ni = nearest_index(map.n_axis, population);
  const size_t pj = nearest_index(map.p_axis, p);
  return map.labels[pj][ni];
}

AdaptiveObserver::AdaptiveObserver(AdaptivePolicy policy, std::uint64_t obs_seed)
    : policy_(std::move(policy)), rng_(obs_seed) {
  policy_.validate();
}

Observation AdaptiveObserver::observe(const SimState& state) {
  const int n_agents = state.agent_count();
  double p;
  if (policy_.fixed_p) {
    p = *policy_.fixed_p;
  } else {
    if (!p_estimate_) p_estimate_ = state.config().zone.coverage();
    p = *p_estimate_;
  }

  // the map was validated at construction; skip select_method's re-check here
  const Method desired =
      policy_.map.labels[nearest_index(policy_.map.p_axis, p)]
                        [nearest_index(policy_.map.n_axis, n_agents)];
  if (!current_) {
    current_ = desired;
    last_switch_step_ = state.step_index();
  } else if (desired != *current_ &&
             state.step_index() - last_switch_step_ >= policy_.switch_hysteresis) {
    current_ = desired;
    last_switch_step_ = state.step_index();
  }

  Observation obs;
  switch (*current_) {
    case Method::BruteForce:
      obs = observe_brute_force(state, state.config().zone);
      break;
    case Method::Indirect:
      obs = observe_indirect(state, state.config().zone);
      break;
    case Method::SelfObservation:
      obs = observe_self(state);
      break;
    case Method::Survey: {
      if (!plan_ || plan_->population != n_agents || plan_->p_expected != p)
        plan_ = SurveyPlan::make(n_agents, p, policy_.survey_d);
      obs = observe_survey(state, *plan_, rng_);
      break;
    }
    case Method::Adaptive:
      throw std::invalid_argument("calibration map labels a cell 'adaptive'");
  }
  obs.delegate = obs.method;
  obs.method = Method::Adaptive;

  if (!policy_.fixed_p)
    p_estimate_ = (1.0 - kRateSmoothing) * *p_estimate_ +
                  kRateSmoothing * obs.value / n_agents;
  return obs;
}

}  // namespace obsim
