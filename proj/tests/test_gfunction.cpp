#include <cmath>

#include "covf/error.hpp"
#include "covf/gfunction.hpp"
#include "covf/rng.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using covf::SymMatrix;
using covf::fourier::GFunctionSpec;

TEST_CASE("eval_g entrywise definitions") {
  const auto cosine = GFunctionSpec::cosine(2);
  const double zero[2] = {0.0, 0.0};
  const auto ones = covf::fourier::eval_g(cosine, zero);
  CHECK(ones(0, 0) == 1.0);
  CHECK(ones(0, 1) == 1.0);
  CHECK(ones(1, 1) == 1.0);

  const auto power = GFunctionSpec::power(2, 1.0, 1.0);
  const double x[2] = {2.0, -3.0};
  const auto pv = covf::fourier::eval_g(power, x);
  CHECK(pv(0, 0) == doctest::Approx(4.0));
  CHECK(pv(0, 1) == doctest::Approx(6.0));
  CHECK(pv(1, 1) == doctest::Approx(9.0));

  const auto gauss = GFunctionSpec::gauss(2);
  const double y[2] = {1.0, 0.0};
  const auto ge = covf::fourier::eval_g(gauss, y);
  CHECK(ge(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(ge(0, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(ge(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("moment maps at reference points") {
  const auto cosine = GFunctionSpec::cosine(2);
  const auto ones = covf::fourier::rho_g(cosine, SymMatrix(2));
  CHECK(ones(0, 0) == 1.0);
  CHECK(ones(0, 1) == 1.0);

  const auto x0 = SymMatrix::sym2(0.09, -0.036, 0.09);
  const auto rho = covf::fourier::rho_g(cosine, x0);
  CHECK(rho(0, 0) == doctest::Approx(std::exp(-0.045)).epsilon(1e-12));
  CHECK(rho(1, 1) == doctest::Approx(std::exp(-0.045)).epsilon(1e-12));
  CHECK(rho(0, 1) == doctest::Approx(std::exp(-0.054)).epsilon(1e-12));

  const auto gauss = GFunctionSpec::gauss(2);
  const auto rg = covf::fourier::rho_g(gauss, SymMatrix::identity(2));
  CHECK(rg(0, 1) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(rg(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // power variation with s = 0: diagonal x^(r/2) * E|N|^r; squares give x
  const auto squares = GFunctionSpec::power(1, 2.0, 0.0);
  const auto rs = covf::fourier::rho_g(squares, SymMatrix::diagonal({0.09}));
  CHECK(rs(0, 0) == doctest::Approx(0.09).epsilon(1e-13));

  CHECK_THROWS_AS(
      covf::fourier::rho_g(GFunctionSpec::power(2, 0.5, 0.5), SymMatrix(2)),
      covf::Error);
}

TEST_CASE("moment maps agree with Monte Carlo expectations") {
  // E[g(U)], U ~ N(0, X), against the entrywise closed forms; this pins the
  // diagonal conventions of eval_g and rho_g to each other.
  covf::Rng rng(31);
  const auto x = SymMatrix::sym2(0.8, -0.3, 1.4);
  const auto root = covf::matrix_sqrt_psd(x);
  const int reps = 400000;

  for (const auto& spec :
       {GFunctionSpec::cosine(2), GFunctionSpec::gauss(2)}) {
    SymMatrix sum(2);
    SymMatrix sum_sq(2);
    double z[2], u[2];
    for (int rep = 0; rep < reps; ++rep) {
      z[0] = rng.normal();
      z[1] = rng.normal();
      for (int i = 0; i < 2; ++i) u[i] = root(i, 0) * z[0] + root(i, 1) * z[1];
      const auto g = covf::fourier::eval_g(spec, u);
      for (int i = 0; i < 2; ++i) {
        for (int j = i; j < 2; ++j) {
          sum.set(i, j, sum(i, j) + g(i, j));
          sum_sq.set(i, j, sum_sq(i, j) + g(i, j) * g(i, j));
        }
      }
    }
    const auto rho = covf::fourier::rho_g(spec, x);
    const auto rho2 = covf::fourier::rho_gg(spec, x);
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        CHECK(sum(i, j) / reps == doctest::Approx(rho(i, j)).epsilon(0.01));
        CHECK(sum_sq(i, j) / reps == doctest::Approx(rho2(i, j)).epsilon(0.01));
      }
    }
  }
}

TEST_CASE("moment map inversion round-trips") {
  const auto cosine = GFunctionSpec::cosine(2);
  const auto x0 = SymMatrix::sym2(0.09, -0.036, 0.09);

  // all-ones inverts to zero
  SymMatrix ones(2);
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) ones.set(i, j, 1.0);
  const auto zero = covf::fourier::rho_g_inverse(cosine, ones);
  CHECK(zero(0, 0) == 0.0);
  CHECK(zero(0, 1) == 0.0);

  const auto back =
      covf::fourier::rho_g_inverse(cosine, covf::fourier::rho_g(cosine, x0));
  CHECK(back(0, 0) == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(back(0, 1) == doctest::Approx(-0.036).epsilon(1e-12));
  CHECK(back(1, 1) == doctest::Approx(0.09).epsilon(1e-12));

  // domain edge: a zero entry is rejected
  SymMatrix bad = ones;
  bad.set(0, 0, 0.0);
  CHECK_THROWS_AS(covf::fourier::rho_g_inverse(cosine, bad), covf::Error);
  try {
    covf::fourier::rho_g_inverse(cosine, bad);
  } catch (const covf::Error& err) {
    CHECK(err.code() == covf::errc::out_of_domain);
  }
}

TEST_CASE("round-trip property on random PSD matrices") {
  covf::Rng rng(17);
  for (const auto& spec :
       {GFunctionSpec::cosine(3), GFunctionSpec::gauss(3)}) {
    for (int trial = 0; trial < 40; ++trial) {
      auto x = oracles::random_psd(3, rng);
      x *= 0.1;  // keep rho_g comfortably inside (0, 1]
      const auto back =
          covf::fourier::rho_g_inverse(spec, covf::fourier::rho_g(spec, x));
      for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
          CHECK(back(i, j) == doctest::Approx(x(i, j)).epsilon(1e-11));
        }
      }
    }
  }
}

TEST_CASE("diagonal scalar inverse") {
  const auto squares = GFunctionSpec::power(1, 2.0, 0.0);
  CHECK(covf::fourier::rho_g_inverse_diagonal(squares, 0.09) ==
        doctest::Approx(0.09).epsilon(1e-13));
  const auto quarter = GFunctionSpec::power(1, 0.25, 0.0);
  const double v = covf::fourier::rho_g(quarter, SymMatrix::diagonal({0.2}))(0, 0);
  CHECK(covf::fourier::rho_g_inverse_diagonal(quarter, v) ==
        doctest::Approx(0.2).epsilon(1e-12));
  const auto cosine = GFunctionSpec::cosine(1);
  CHECK(covf::fourier::rho_g_inverse_diagonal(cosine, std::exp(-0.045)) ==
        doctest::Approx(0.09).epsilon(1e-12));
}
