#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nlf/radial_sampler.hpp"

using namespace nlf;

TEST_CASE("gamma_eff = 1 gives uniform samples") {
  RadialSampler s(1.0, 0.0, 1.0);
  Rng rng(1);
  double mean = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double h = s.sample(rng);
    CHECK(h >= 0.0);
    CHECK(h <= 1.0);
    mean += h;
  }
  mean /= n;
  // sd of uniform = 1/sqrt(12)
  CHECK(std::abs(mean - 0.5) < 3.0 * (1.0 / std::sqrt(12.0)) / std::sqrt(double(n)));
  CHECK(s.weight() == doctest::Approx(1.0));
}

TEST_CASE("gamma_eff = 2 on [0,1]: mean h = 2/3 within 3 standard errors") {
  RadialSampler s(2.0, 0.0, 1.0);
  Rng rng(2);
  double mean = 0.0;
  const long n = 1000000;
  for (long i = 0; i < n; ++i) mean += s.sample(rng);
  mean /= n;
  // density 2h: var = 1/2 - (2/3)^2 = 1/18
  const double se = std::sqrt(1.0 / 18.0 / double(n));
  CHECK(std::abs(mean - 2.0 / 3.0) < 3.0 * se);
}

TEST_CASE("gamma_eff = 0 samples log-uniformly") {
  const double a = 0.01, b = 10.0;
  RadialSampler s(0.0, a, b);
  Rng rng(3);
  double mean_log = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double h = s.sample(rng);
    CHECK(h >= a * (1 - 1e-12));
    CHECK(h <= b * (1 + 1e-12));
    mean_log += std::log(h);
  }
  mean_log /= n;
  const double mid = 0.5 * (std::log(a) + std::log(b));
  const double spread = std::log(b) - std::log(a);
  CHECK(std::abs(mean_log - mid) < 3.0 * spread / std::sqrt(12.0 * n));
}

TEST_CASE("weights make the estimator unbiased") {
  // f(h) = h against density ~ h^{-3/2} on [1/4, 4]:
  // integral of h * h^{-3/2} dh = 2 (2 - 1/2) = 3
  RadialSampler s(-0.5, 0.25, 4.0);
  Rng rng(4);
  double acc = 0.0, acc2 = 0.0;
  const long n = 1000000;
  for (long i = 0; i < n; ++i) {
    const double v = s.weight() * s.sample(rng);
    acc += v;
    acc2 += v * v;
  }
  const double mean = acc / n;
  const double se = std::sqrt((acc2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 3.0) < 3.0 * se);
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(RadialSampler(-1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RadialSampler(0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RadialSampler(1.0, -0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RadialSampler(1.0, 2.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(RadialSampler(0.5, 0.0, 1.0));
}

TEST_CASE("streams are deterministic per seed") {
  RadialSampler s(-1.5, 0.1, 2.0);
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double va = s.sample(a), vb = s.sample(b), vc = s.sample(c);
    all_equal &= va == vb;
    any_diff |= va != vc;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}
