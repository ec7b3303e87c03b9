#pragma once

#include <random>
#include <vector>

namespace obsim {

// Sampling design for the statistical-survey observer.
struct SurveyPlan {
  int n = 1;               // sample size
  double d = 0.08;         // accepted absolute error on the rate
  double p_expected = 0.2; // expected rate E(Z)/N
  int population = 1;      // N

  // Derives n from (N, p, d) via the Horvitz-Thompson sizing formula.
  static SurveyPlan make(int population, double p_expected, double d);

  void validate() const;
};

// S^2 = (1 - p) * p, the variance proxy for a homogeneous 0/1 population.
double variance_proxy(double p);

// n from 1/n = d^2 / (4 S^2) + 1/N, rounded up and clamped to [1, N].
// S^2 = 0 degenerates to n = 1 (zero-variance population).
int sample_size(int population, double p, double d);

// Expansion estimator: Z_hat = N * hits / n.
double estimate_total(int hits, int n, int population);

// Simple random sample without replacement of n distinct ids from [0, N),
// via sparse partial Fisher-Yates (O(n) expected time and space).
std::vector<int> srswor(int population, int n, std::mt19937_64& rng);

}  // namespace obsim
