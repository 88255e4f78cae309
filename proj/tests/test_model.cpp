#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kslab/model.hpp"

#include <random>

using namespace kslab;

TEST_CASE("f_epsilon evaluates the printed formula") {
  CHECK(f_epsilon(10.0, 0.1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f_epsilon(7.0, 0.0) == 1.0);
  CHECK(f_epsilon(3.0, 2.0) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK_THROWS_AS(f_epsilon(-1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(f_epsilon(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("f_epsilon range and monotonicity") {
  std::mt19937 rng(991u);
  std::uniform_real_distribution<double> sdist(0.0, 50.0);
  std::uniform_real_distribution<double> edist(0.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const double s = sdist(rng);
    const double e = edist(rng);
    const double f = f_epsilon(s, e);
    CHECK(f > 0.0);
    CHECK(f <= 1.0);
    // nonincreasing in both arguments
    CHECK(f_epsilon(s + 1.0, e) <= f);
    CHECK(f_epsilon(s, e + 1.0) <= f);
  }
}

TEST_CASE("flux coefficient saturates") {
  CHECK(flux_coefficient(10.0, 0.1) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(flux_coefficient(0.0, 0.5) == 0.0);
  const double big = flux_coefficient(1e6, 1.0);
  CHECK(big == doctest::Approx(1e6 / (1.0 + 1e6)).epsilon(1e-15));
  CHECK(big < 1.0);  // < 1/eps

  std::mt19937 rng(992u);
  std::uniform_real_distribution<double> sdist(0.0, 100.0);
  for (double eps : {0.0, 0.3, 2.0}) {
    double prev = 0.0;
    for (double s = 0.0; s <= 40.0; s += 0.25) {
      const double c = flux_coefficient(s, eps);
      CHECK(c >= prev);         // nondecreasing in s
      CHECK(c <= s + 1e-15);    // bounded by u
      if (eps > 0.0) CHECK(c < 1.0 / eps);
      prev = c;
    }
    (void)sdist(rng);
  }
}

TEST_CASE("logistic source zeros and signs") {
  CHECK(logistic_source(2.0, 2.0, 1.0) == 0.0);  // carrying capacity, exact
  CHECK(logistic_source(1.0, 0.0, 1.0) == doctest::Approx(-1.0));
  CHECK(logistic_source(0.5, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(logistic_source(0.0, 3.0, 2.0) == 0.0);
  CHECK_THROWS_AS(logistic_source(-0.1, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(logistic_source(1.0, 1.0, 0.0), std::invalid_argument);

  // positive iff 0 < u < a/mu when a > 0
  const double a = 1.5, mu = 0.75;
  for (double u = 0.0; u <= 4.0; u += 0.05) {
    const double s = logistic_source(u, a, mu);
    if (u > 0.0 && u < a / mu) {
      CHECK(s > 0.0);
    } else if (u == 0.0 || u == a / mu) {
      CHECK(s == doctest::Approx(0.0).epsilon(1e-14));
    } else {
      CHECK(s < 0.0);
    }
  }
}

TEST_CASE("parameters validate their ranges") {
  Parameters p;
  CHECK_NOTHROW(p.validate());
  p.mu = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = Parameters{};
  p.a = -2.0;  // negative growth is allowed
  CHECK_NOTHROW(p.validate());
  p.chi = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
