#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "obsim/sampling.hpp"

using namespace obsim;

TEST_CASE("variance proxy") {
  CHECK(variance_proxy(0.0) == 0.0);
  CHECK(variance_proxy(1.0) == 0.0);
  CHECK(variance_proxy(0.5) == doctest::Approx(0.25));
  CHECK(variance_proxy(0.2) == doctest::Approx(0.16));
  CHECK_THROWS_AS(variance_proxy(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(variance_proxy(1.1), std::invalid_argument);
}

TEST_CASE("sample size formula") {
  // n^-1 = d^2/(4 S^2) + 1/N with S^2 = 0.16:
  // 0.0064/0.64 + 1/10000 = 0.0101 -> ceil(99.0099...) = 100
  CHECK(sample_size(10000, 0.2, 0.08) == 100);

  // lower clamp path: n^-1 = 1/1 + 0.01 = 1.01 -> ceil(0.9901) = 1
  CHECK(sample_size(100, 0.5, 1.0) == 1);

  // census limit as d -> 0
  CHECK(sample_size(100, 0.5, 1e-9) == 100);
  CHECK(sample_size(10000, 0.5, 1e-12) == 10000);

  // zero-variance population needs a single probe
  CHECK(sample_size(1000, 0.0, 0.05) == 1);
  CHECK(sample_size(1000, 1.0, 0.05) == 1);

  CHECK_THROWS_AS(sample_size(1000, 0.2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_size(1000, 0.2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(sample_size(0, 0.2, 0.1), std::invalid_argument);
}

TEST_CASE("sample size monotonicity and clamp") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pop(1, 50000);
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  std::uniform_real_distribution<double> err(1e-4, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const int n_pop = pop(rng);
    const double p = rate(rng);
    double d1 = err(rng), d2 = err(rng);
    if (d1 > d2) std::swap(d1, d2);
    const int n1 = sample_size(n_pop, p, d1);
    const int n2 = sample_size(n_pop, p, d2);
    CHECK(n1 >= n2);
    CHECK(n1 >= 1);
    CHECK(n1 <= n_pop);
    // maximal at p = 0.5 for fixed d, N
    CHECK(sample_size(n_pop, 0.5, d1) >= sample_size(n_pop, p, d1));
  }
}

TEST_CASE("estimate total") {
  CHECK(estimate_total(0, 100, 10000) == 0.0);
  CHECK(estimate_total(100, 100, 10000) == 10000.0);
  CHECK(estimate_total(20, 100, 10000) == doctest::Approx(2000.0));
  CHECK_THROWS_AS(estimate_total(101, 100, 10000), std::invalid_argument);
  CHECK_THROWS_AS(estimate_total(-1, 100, 10000), std::invalid_argument);
  CHECK_THROWS_AS(estimate_total(5, 101, 100), std::invalid_argument);
}

TEST_CASE("srswor basics") {
  std::mt19937_64 rng(42);

  auto full = srswor(10, 10, rng);
  std::sort(full.begin(), full.end());
  for (int i = 0; i < 10; ++i) CHECK(full[i] == i);

  for (int trial = 0; trial < 100; ++trial) {
    const auto ids = srswor(50, 10, rng);
    CHECK(ids.size() == 10);
    std::set<int> distinct(ids.begin(), ids.end());
    CHECK(distinct.size() == 10);
    for (int id : ids) {
      CHECK(id >= 0);
      CHECK(id < 50);
    }
  }

  CHECK_THROWS_AS(srswor(5, 6, rng), std::invalid_argument);
  CHECK_THROWS_AS(srswor(5, 0, rng), std::invalid_argument);
}

TEST_CASE("srswor uniformity, n=1 N=2") {
  std::mt19937_64 rng(123);
  int count0 = 0;
  for (int i = 0; i < 10000; ++i)
    if (srswor(2, 1, rng)[0] == 0) ++count0;
  CHECK(count0 > 4700);
  CHECK(count0 < 5300);
}

TEST_CASE("srswor inclusion probability, N=50 n=10") {
  std::mt19937_64 rng(99);
  std::vector<int> hits(50, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
    for (int id : srswor(50, 10, rng)) ++hits[id];
  // empirical inclusion frequency within 5 sigma of n/N = 0.2
  const double sigma = std::sqrt(0.2 * 0.8 / draws);
  for (int id = 0; id < 50; ++id) {
    const double freq = static_cast<double>(hits[id]) / draws;
    CHECK(std::abs(freq - 0.2) < 5.0 * sigma);
  }
}

TEST_CASE("survey plan") {
  const auto plan = SurveyPlan::make(10000, 0.2, 0.08);
  CHECK(plan.n == 100);
  CHECK(plan.population == 10000);
  plan.validate();

  SurveyPlan bad = plan;
  bad.n = 10001;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
