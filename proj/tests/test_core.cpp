#include <cmath>

#include "covf/error.hpp"
#include "covf/grid.hpp"
#include "covf/paths.hpp"
#include "covf/rng.hpp"
#include "covf/symmat.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using covf::Error;
using covf::SymMatrix;

namespace {

double rel_frobenius_diff(const SymMatrix& a, const SymMatrix& b) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) {
      num += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
      den += b(i, j) * b(i, j);
    }
  }
  return std::sqrt(num) / std::sqrt(std::max(den, 1e-300));
}

SymMatrix multiply_sym(const SymMatrix& a, const SymMatrix& b) {
  SymMatrix out(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = i; j < a.dim(); ++j) {
      double sum = 0.0;
      for (int k = 0; k < a.dim(); ++k) sum += a(i, k) * b(k, j);
      out.set(i, j, sum);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("time grid index math") {
  covf::TimeGrid grid(127750, 1.0);
  CHECK(grid.steps() == 127750);
  CHECK(grid.count() == 127751);
  CHECK(grid.time(0) == 0.0);
  CHECK(grid.time(grid.steps()) <= grid.horizon() + 1e-15);
  CHECK(grid.dt() == doctest::Approx(1.0 / 127750).epsilon(1e-15));

  covf::TimeGrid partial(10, 0.55);
  CHECK(partial.steps() == 5);  // floor(10 * 0.55)
  CHECK(partial.time(partial.steps()) == doctest::Approx(0.5));

  covf::TimeGrid awkward(10, 0.3);  // 10*0.3 rounds just below 3
  CHECK(awkward.steps() == 3);

  CHECK_THROWS_AS(covf::TimeGrid(0, 1.0), Error);
  CHECK_THROWS_AS(covf::TimeGrid(10, -1.0), Error);
}

TEST_CASE("matrix sqrt: identity and diagonal") {
  const auto id = SymMatrix::identity(2);
  CHECK(rel_frobenius_diff(covf::matrix_sqrt_psd(id), id) < 1e-14);

  const auto d = covf::matrix_sqrt_psd(SymMatrix::diagonal({4.0, 9.0}));
  CHECK(d(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(d(1, 1) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(d(0, 1) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("matrix sqrt reproduces the study initial covariance") {
  const auto x0 = SymMatrix::sym2(0.09, -0.036, 0.09);
  const auto root = covf::matrix_sqrt_psd(x0);
  CHECK(rel_frobenius_diff(multiply_sym(root, root), x0) < 1e-12);
  CHECK(covf::is_psd(root));
}

TEST_CASE("matrix sqrt squares back for random PSD inputs") {
  covf::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + static_cast<int>(rng.uniform() * 5);
    const auto a = oracles::random_psd(dim, rng);
    const auto root = covf::matrix_sqrt_psd(a);
    CHECK(rel_frobenius_diff(multiply_sym(root, root), a) < 1e-12);
  }
}

TEST_CASE("matrix sqrt commutes with orthogonal conjugation") {
  covf::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform() * 3);
    const auto a = oracles::random_psd(dim, rng);
    const auto q = oracles::random_orthogonal(dim, rng);

    // conj = Q' a Q
    SymMatrix conj(dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        double sum = 0.0;
        for (int k = 0; k < dim; ++k) {
          for (int l = 0; l < dim; ++l) {
            sum += q[k * dim + i] * a(k, l) * q[l * dim + j];
          }
        }
        conj.set(i, j, sum);
      }
    }
    const auto lhs = covf::matrix_sqrt_psd(conj);
    const auto root = covf::matrix_sqrt_psd(a);
    SymMatrix rhs(dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        double sum = 0.0;
        for (int k = 0; k < dim; ++k) {
          for (int l = 0; l < dim; ++l) {
            sum += q[k * dim + i] * root(k, l) * q[l * dim + j];
          }
        }
        rhs.set(i, j, sum);
      }
    }
    CHECK(rel_frobenius_diff(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("matrix sqrt rejects indefinite input") {
  CHECK_THROWS_AS(covf::matrix_sqrt_psd(SymMatrix::diagonal({1.0, -1.0})), Error);
  try {
    covf::matrix_sqrt_psd(SymMatrix::diagonal({1.0, -1.0}));
  } catch (const Error& err) {
    CHECK(err.code() == covf::errc::not_psd);
  }
  // tiny negative eigenvalues inside the tolerance are clipped, not rejected
  const auto nearly = SymMatrix::diagonal({1.0, -1e-12});
  const auto root = covf::matrix_sqrt_psd(nearly);
  CHECK(root(1, 1) == 0.0);
}

TEST_CASE("from_full rejects asymmetry") {
  const double bad[4] = {1.0, 0.5, 0.4, 1.0};
  CHECK_THROWS_AS(SymMatrix::from_full(2, bad), Error);
  const double good[4] = {1.0, 0.5, 0.5, 1.0};
  const auto m = SymMatrix::from_full(2, good);
  CHECK(m(0, 1) == 0.5);
}

TEST_CASE("psd projection clips negative eigenvalues") {
  const auto clip = covf::psd_project(SymMatrix::diagonal({1.0, -0.001}));
  CHECK(clip.projected(0, 0) == doctest::Approx(1.0));
  CHECK(clip.projected(1, 1) == doctest::Approx(0.0));
  CHECK(clip.clipped_mass == doctest::Approx(0.001));

  // PSD input is a fixed point with zero mass
  const auto x0 = SymMatrix::sym2(0.09, -0.036, 0.09);
  const auto fixed = covf::psd_project(x0);
  CHECK(fixed.clipped_mass == 0.0);
  CHECK(rel_frobenius_diff(fixed.projected, x0) == 0.0);

  // [[0,1],[1,0]] has eigenvalues +-1; clipping -1 leaves 0.5 * ones
  const auto off = covf::psd_project(SymMatrix::sym2(0.0, 1.0, 0.0));
  CHECK(off.clipped_mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(off.projected(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(off.projected(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(off.projected(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  const auto eig = covf::sym_eigenvalues(off.projected);
  CHECK(eig.front() >= -1e-15);
}

TEST_CASE("psd projection is idempotent") {
  covf::Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    SymMatrix a(3);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) a.set(i, j, rng.normal());
    }
    const auto once = covf::psd_project(a);
    const auto twice = covf::psd_project(once.projected);
    CHECK(twice.clipped_mass <= 1e-12);
    CHECK(rel_frobenius_diff(twice.projected, once.projected) < 1e-12);
  }
}

TEST_CASE("sampled path validates length and finiteness") {
  covf::TimeGrid grid(4, 1.0);
  CHECK_THROWS_AS(covf::SampledPath(grid, 1, std::vector<double>(3, 0.0)), Error);
  std::vector<double> bad(5, 0.0);
  bad[2] = std::nan("");
  CHECK_THROWS_AS(covf::SampledPath(grid, 1, bad), Error);
  const covf::SampledPath ok(grid, 1, std::vector<double>(5, 1.0));
  CHECK(ok.count() == 5);
}

TEST_CASE("matrix path validates monotone times") {
  std::vector<double> times{0.0, 0.5, 0.5};
  std::vector<double> values(9, 0.0);
  CHECK_THROWS_AS(covf::SymMatrixPath(times, 1, std::vector<double>(3, 0.0)), Error);
  (void)values;
}

TEST_CASE("rng streams are deterministic and splittable") {
  covf::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());

  covf::Rng s1 = covf::Rng::substream(42, 1);
  covf::Rng s2 = covf::Rng::substream(42, 2);
  CHECK(s1.uniform() != s2.uniform());

  // Poisson with zero mean consumes nothing and returns zero.
  covf::Rng c(5);
  CHECK(c.poisson(0.0) == 0);
  const double next = c.uniform();
  covf::Rng d(5);
  CHECK(d.uniform() == next);
}

TEST_CASE("rng moments are sane") {
  covf::Rng rng(2024);
  const int count = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < count; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  CHECK(std::abs(sum / count) < 0.01);
  CHECK(sumsq / count == doctest::Approx(1.0).epsilon(0.02));

  double jumps = 0.0;
  for (int i = 0; i < 100000; ++i) jumps += static_cast<double>(rng.poisson(0.02));
  CHECK(jumps / 100000.0 == doctest::Approx(0.02).epsilon(0.1));

  double marks = 0.0;
  for (int i = 0; i < 100000; ++i) marks += rng.exponential(0.05);
  CHECK(marks / 100000.0 == doctest::Approx(0.05).epsilon(0.05));
}
