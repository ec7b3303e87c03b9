#include "obsim/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace obsim {

SurveyPlan SurveyPlan::make(int population, double p_expected, double d) {
  SurveyPlan plan;
  plan.population = population;
  plan.p_expected = p_expected;
  plan.d = d;
  plan.n = sample_size(population, p_expected, d);
  return plan;
}

void SurveyPlan::validate() const {
  if (population < 1) throw std::invalid_argument("population must be >= 1");
  if (n < 1 || n > population)
    throw std::invalid_argument("sample size must be in [1, N]");
  if (!(d > 0.0)) throw std::invalid_argument("accepted error d must be > 0");
  if (p_expected < 0.0 || p_expected > 1.0)
    throw std::invalid_argument("expected rate must be in [0, 1]");
}

double variance_proxy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("rate must be in [0, 1]");
  return (1.0 - p) * p;
}

int sample_size(int population, double p, double d) {
  if (population < 1) throw std::invalid_argument("population must be >= 1");
  if (!(d > 0.0)) throw std::invalid_argument("accepted error d must be > 0");
  const double s2 = variance_proxy(p);
  if (s2 == 0.0) return 1;  // homogeneous population, one probe suffices
  const double inv_n = d * d / (4.0 * s2) + 1.0 / population;
  const double raw = 1.0 / inv_n;
  long n = static_cast<long>(std::ceil(raw));
  if (n < 1) n = 1;
  if (n > population) n = population;
  return static_cast<int>(n);
}

double estimate_total(int hits, int n, int population) {
  if (n < 1 || n > population)
    throw std::invalid_argument("sample size must be in [1, N]");
  if (hits < 0 || hits > n)
    throw std::invalid_argument("hit count must be in [0, n]");
  return static_cast<double>(population) * hits / n;
}

std::vector<int> srswor(int population, int n, std::mt19937_64& rng) {
  if (population < 1) throw std::invalid_argument("population must be >= 1");
  if (n < 1 || n > population)
    throw std::invalid_argument("sample size must be in [1, N]");
  // Partial Fisher-Yates over a virtual identity array, stored sparsely.
  std::unordered_map<int, int> displaced;
  displaced.reserve(static_cast<size_t>(n) * 2);
  std::vector<int> out;
  out.reserve(n);
  auto value_at = [&displaced](int i) {
    auto it = displaced.find(i);
    return it == displaced.end() ? i : it->second;
  };
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<int> pick(i, population - 1);
    const int j = pick(rng);
    const int vj = value_at(j);
    displaced[j] = value_at(i);
    out.push_back(vj);
  }
  return out;
}

}  // namespace obsim
