#include <cmath>
#include <numbers>

#include "covf/error.hpp"
#include "covf/special.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

TEST_CASE("gaussian absolute moments") {
  CHECK(covf::gaussian_abs_moment(1.0) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-14));
  CHECK(covf::gaussian_abs_moment(2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(covf::gaussian_abs_moment(4.0) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("2F1 basic values") {
  CHECK(covf::hyp2f1(0.3, 0.7, 1.1, 0.0) == 1.0);
  // 2F1(1,1;2;x) = -log(1-x)/x
  CHECK(covf::hyp2f1(1.0, 1.0, 2.0, 0.5) ==
        doctest::Approx(-std::log(0.5) / 0.5).epsilon(1e-13));
  // terminating polynomial: 2F1(-1,-1;1/2;x) = 1 + 2x, any x
  CHECK(covf::hyp2f1(-1.0, -1.0, 0.5, 0.3) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(covf::hyp2f1(-1.0, -1.0, 0.5, 5.0) == doctest::Approx(11.0).epsilon(1e-14));
}

TEST_CASE("2F1 domain errors") {
  CHECK_THROWS_AS(covf::hyp2f1(0.3, 0.7, 0.0, 0.5), covf::Error);
  CHECK_THROWS_AS(covf::hyp2f1(0.3, 0.7, -2.0, 0.5), covf::Error);
  CHECK_THROWS_AS(covf::hyp2f1(0.3, 0.7, 1.1, 0.9999999999), covf::Error);
}

TEST_CASE("bivariate absolute moment: closed special cases") {
  // corr = 0 factorizes into marginal moments
  for (double r : {0.5, 1.0, 2.0}) {
    for (double s : {0.5, 1.0, 2.0}) {
      CHECK(covf::bivariate_abs_moment(r, s, 0.0) ==
            doctest::Approx(covf::gaussian_abs_moment(r) *
                            covf::gaussian_abs_moment(s))
                .epsilon(1e-13));
    }
  }
  // r = s = 2 is the Isserlis identity E[U^2 V^2] = 1 + 2 corr^2
  for (double corr : {0.0, 0.3, 0.9, 1.0}) {
    CHECK(covf::bivariate_abs_moment(2.0, 2.0, corr) ==
          doctest::Approx(1.0 + 2.0 * corr * corr).epsilon(1e-13));
  }
  // r = s = 1: E|UV| = (2/pi)(sqrt(1-c^2) + c asin c)
  for (double corr : {0.0, 0.3, 0.7}) {
    const double expected =
        (2.0 / std::numbers::pi) *
        (std::sqrt(1.0 - corr * corr) + corr * std::asin(corr));
    CHECK(covf::bivariate_abs_moment(1.0, 1.0, corr) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("bivariate absolute moment matches the quadrature oracle") {
  for (double r : {0.5, 1.0, 2.0}) {
    for (double s : {0.5, 2.0}) {
      for (double corr : {0.0, 0.3, 0.9}) {
        const double oracle = oracles::quad_bivariate_abs_moment(r, s, corr);
        CHECK(covf::bivariate_abs_moment(r, s, corr) ==
              doctest::Approx(oracle).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("bivariate absolute moment is symmetric in (r, s)") {
  covf::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const double r = 0.1 + 2.4 * rng.uniform();
    const double s = 0.1 + 2.4 * rng.uniform();
    const double corr = 0.98 * (2.0 * rng.uniform() - 1.0);
    CHECK(covf::bivariate_abs_moment(r, s, corr) ==
          doctest::Approx(covf::bivariate_abs_moment(s, r, corr))
              .epsilon(1e-13));
  }
}
