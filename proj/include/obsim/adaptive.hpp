#pragma once

#include <optional>
#include <random>

#include "obsim/bench.hpp"

namespace obsim {

struct AdaptivePolicy {
  CalibrationMap map;
  // Fixed rate, or nullopt to track a running estimate (EMA of value/N,
  // smoothing 0.1, seeded from the configured zone's coverage).
  std::optional<double> fixed_p = 0.2;
  int switch_hysteresis = 0;  // minimum steps between method switches
  double survey_d = 0.08;     // sizing error used when delegating to Survey

  void validate() const;
};

// Label of the map cell nearest to (N, p), nearest-neighbor per axis.
Method select_method(const CalibrationMap& map, double population, double p);

// Per-run adaptive observer: consults the calibration map each step and
// delegates to the selected concrete observer.
class AdaptiveObserver {
 public:
  AdaptiveObserver(AdaptivePolicy policy, std::uint64_t obs_seed);

  Observation observe(const SimState& state);

  std::optional<Method> current_method() const { return current_; }

 private:
  AdaptivePolicy policy_;
  std::mt19937_64 rng_;
  std::optional<Method> current_;
  long last_switch_step_ = 0;
  std::optional<double> p_estimate_;
  std::optional<SurveyPlan> plan_;  // reused while (N, p) is unchanged
};

}  // namespace obsim
