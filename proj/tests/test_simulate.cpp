#include <cmath>

#include "covf/error.hpp"
#include "covf/simulate.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using covf::SymMatrix;
using covf::TimeGrid;
namespace sim = covf::sim;

namespace {

// RK4 on the matrix ODE dX = (b + M X + X M') dt, for the no-noise oracle.
SymMatrix ode_oracle(const sim::BatesParams& p, double t_end, int steps) {
  const int d = p.dim;
  auto rate = [&](const SymMatrix& x) {
    SymMatrix out(d);
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        double mx = 0.0, xm = 0.0;
        for (int k = 0; k < d; ++k) {
          mx += p.mean_reversion[i * d + k] * x(k, j);
          xm += x(i, k) * p.mean_reversion[j * d + k];
        }
        out.set(i, j, p.affine_level(i, j) + mx + xm);
      }
    }
    return out;
  };
  auto axpy = [&](const SymMatrix& x, const SymMatrix& k, double h) {
    SymMatrix out = x;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) out.set(i, j, out(i, j) + h * k(i, j));
    return out;
  };
  SymMatrix x = p.x0;
  const double h = t_end / steps;
  for (int s = 0; s < steps; ++s) {
    const auto k1 = rate(x);
    const auto k2 = rate(axpy(x, k1, 0.5 * h));
    const auto k3 = rate(axpy(x, k2, 0.5 * h));
    const auto k4 = rate(axpy(x, k3, h));
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        x.set(i, j, x(i, j) + h / 6.0 *
                                  (k1(i, j) + 2.0 * k2(i, j) + 2.0 * k3(i, j) +
                                   k4(i, j)));
      }
    }
  }
  return x;
}

sim::BatesParams quiet_params() {
  auto p = oracles::study_params();
  p.alpha = SymMatrix(2);         // Sigma = 0
  p.affine_level = SymMatrix(2);  // satisfies b - (d-1) alpha PSD
  p.mean_reversion.assign(4, 0.0);
  p.lambda_y = {0.0, 0.0};
  p.lambda_x11 = 0.0;
  return p;
}

}  // namespace

TEST_CASE("driverless covariance stays at its initial value") {
  const auto p = quiet_params();
  const auto out = sim::simulate_bates(p, TimeGrid(500, 1.0), 1);
  for (std::size_t m = 0; m < out.x_path.size(); ++m) {
    CHECK(out.x_path.entry(m, 0, 0) == 0.09);
    CHECK(out.x_path.entry(m, 0, 1) == -0.036);
    CHECK(out.x_path.entry(m, 1, 1) == 0.09);
  }
  CHECK(out.x_jumps.empty());
  CHECK(out.y_jumps.empty());
  CHECK(out.psd_clip_count == 0);
}

TEST_CASE("no-jump limit leaves only the diffusive drift") {
  auto p = quiet_params();
  p.jump_mu = {0.4, -0.7};  // arbitrary; unused when lambda_y = 0
  const int reps = 256;
  const double horizon = 1.0;
  double sum1 = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto out = sim::simulate_bates(p, TimeGrid(400, horizon), 100 + rep);
    CHECK(out.y_jumps.empty());
    sum1 += out.y_path.value(out.y_path.count() - 1, 0);
  }
  // with X frozen at x0, E[Y_T] = y0 - X_11 T / 2
  const double expected = -0.5 * 0.09 * horizon;
  const double se = std::sqrt(0.09 * horizon / reps);
  CHECK(std::abs(sum1 / reps - expected) < 3.0 * se);
}

TEST_CASE("identical seeds give bit-identical output") {
  const auto p = oracles::study_params();
  const auto a = sim::simulate_bates(p, TimeGrid(2000, 0.25), 77);
  const auto b = sim::simulate_bates(p, TimeGrid(2000, 0.25), 77);
  CHECK(a.y_path.values().size() == b.y_path.values().size());
  for (std::size_t i = 0; i < a.y_path.values().size(); ++i) {
    CHECK(a.y_path.values()[i] == b.y_path.values()[i]);
  }
  for (std::size_t i = 0; i < a.x_path.packed_values().size(); ++i) {
    CHECK(a.x_path.packed_values()[i] == b.x_path.packed_values()[i]);
  }
  CHECK(a.y_jumps.size() == b.y_jumps.size());
  const auto c = sim::simulate_bates(p, TimeGrid(2000, 0.25), 78);
  CHECK(a.y_path.value(100, 0) != c.y_path.value(100, 0));
}

TEST_CASE("noise-free covariance follows the linear ODE") {
  auto p = quiet_params();
  p.affine_level = SymMatrix::sym2(0.25, 0.12, 0.46);
  p.mean_reversion = {-1.6, -0.2, -0.4, -1.0};

  const auto reference = ode_oracle(p, 1.0, 4000);
  double previous_error = 0.0;
  for (long long n : {400LL, 800LL, 1600LL}) {
    const auto out = sim::simulate_bates(p, TimeGrid(n, 1.0), 5);
    const auto last = out.x_path.size() - 1;
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        err = std::max(err,
                       std::abs(out.x_path.entry(last, i, j) - reference(i, j)));
      }
    }
    if (previous_error > 0.0) {
      const double ratio = previous_error / err;
      CHECK(ratio > 1.7);  // first-order convergence in 1/n
      CHECK(ratio < 2.3);
    }
    previous_error = err;
  }
}

TEST_CASE("study-scale path: PSD, clipping and jump bookkeeping") {
  const auto p = oracles::study_params();
  const auto out = sim::simulate_bates(p, TimeGrid(oracles::study_grid_n, 1.0), 42);

  // every stored covariance is PSD after projection
  for (std::size_t m = 0; m < out.x_path.size(); m += 997) {
    CHECK(covf::is_psd(out.x_path.value(m), 1e-9));
  }
  // clipping is rare at the study parameters
  CHECK(static_cast<double>(out.psd_clip_count) <
        0.01 * static_cast<double>(out.x_path.size()));
  CHECK(out.max_clip_fraction <= 0.10);

  // jump counts concentrate around lambda T
  const double y_jump_count = static_cast<double>(out.y_jumps.size());
  CHECK(y_jump_count > 200.0 - 5.0 * std::sqrt(200.0));
  CHECK(y_jump_count < 200.0 + 5.0 * std::sqrt(200.0));
  const double x_jump_count = static_cast<double>(out.x_jumps.size());
  CHECK(x_jump_count >= 1.0);
  CHECK(x_jump_count < 10.0 + 5.0 * std::sqrt(10.0));

  // X jumps are positive exponential marks on the (1,1) entry
  for (const auto& jump : out.x_jumps) CHECK(jump.mark > 0.0);
}

TEST_CASE("strip_jumps removes exactly the recorded marks") {
  const auto p = oracles::study_params();
  const auto out = sim::simulate_bates(p, TimeGrid(20000, 0.2), 11);
  REQUIRE(!out.y_jumps.empty());
  const auto stripped = sim::strip_jumps(out);

  // identity when there is nothing to strip
  const auto none = sim::strip_jumps(stripped);
  for (std::size_t i = 0; i < stripped.y_path.values().size(); ++i) {
    CHECK(none.y_path.values()[i] == stripped.y_path.values()[i]);
  }

  // adding the cumulative marks back reproduces the original path
  const long long count = out.y_path.count();
  for (int comp = 0; comp < 2; ++comp) {
    double cumulative = 0.0;
    std::size_t next = 0;
    std::vector<const sim::JumpEvent*> jumps;
    for (const auto& jump : out.y_jumps) {
      if (jump.component == comp) jumps.push_back(&jump);
    }
    for (long long m = 0; m < count; ++m) {
      const double t = out.y_path.grid().time(m);
      while (next < jumps.size() && jumps[next]->time <= t + 1e-12) {
        cumulative += jumps[next]->mark;
        ++next;
      }
      CHECK(stripped.y_path.value(m, comp) + cumulative ==
            doctest::Approx(out.y_path.value(m, comp)).epsilon(1e-12));
    }
  }

  // after stripping, increments pass a 6-sigma diffusion-scale test
  const double h = out.y_path.grid().dt();
  for (long long m = 1; m < count; ++m) {
    const double x_left = out.x_path.entry(m - 1, 0, 0);
    const double sd = std::sqrt(std::max(x_left, 1e-12) * h);
    const double drift_bound = 0.6 * h;  // |drift| at the study parameters
    CHECK(std::abs(stripped.y_path.increment(m, 0)) <= 6.0 * sd + drift_bound);
  }
}

TEST_CASE("martingale property of the compensated price") {
  // E[exp(Y_t,i)] stays within Monte Carlo error of its compensated level
  // at a reduced horizon (the study-scale check lives in the acceptance
  // suite).
  const auto p = oracles::study_params();
  const double horizon = 0.25;
  const int reps = 256;
  double sum = 0.0, sumsq = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto out = sim::simulate_bates(p, TimeGrid(2000, horizon), 500 + rep);
    const double value = std::exp(out.y_path.value(out.y_path.count() - 1, 0));
    sum += value;
    sumsq += value * value;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sumsq / reps - mean * mean) / reps);
  CHECK(std::abs(mean - 1.0) < 3.0 * se + 0.01);
}

TEST_CASE("parameter validation") {
  auto p = oracles::study_params();
  p.rho = {0.9, 0.9};  // rho'rho > 1
  CHECK_THROWS_AS(sim::simulate_bates(p, TimeGrid(500, 1.0), 1), covf::Error);

  p = oracles::study_params();
  p.affine_level = covf::SymMatrix::sym2(0.01, 0.0, 0.01);  // b - alpha not PSD
  CHECK_THROWS_AS(sim::simulate_bates(p, TimeGrid(500, 1.0), 1), covf::Error);

  p = oracles::study_params();
  CHECK_THROWS_AS(sim::simulate_bates(p, TimeGrid(50, 1.0), 1), covf::Error);

  p.theta = -0.05;
  CHECK_THROWS_AS(sim::simulate_bates(p, TimeGrid(500, 1.0), 1), covf::Error);
}

TEST_CASE("violent diffusion trips the degenerate-step guard") {
  sim::BatesParams p;
  p.dim = 2;
  p.y0 = {0.0, 0.0};
  p.x0 = SymMatrix::identity(2);
  p.mean_reversion = {0.0, 0.0, 0.0, 0.0};
  p.alpha = SymMatrix::sym2(400.0, 0.0, 400.0);
  p.affine_level = SymMatrix::sym2(440.0, 0.0, 440.0);
  p.rho = {0.0, 0.0};
  p.lambda_y = {0.0, 0.0};
  p.jump_mu = {0.0, 0.0};
  p.jump_sigma = {0.01, 0.01};
  p.lambda_x11 = 0.0;
  p.theta = 0.05;
  try {
    sim::simulate_bates(p, TimeGrid(100, 1.0), 3);
    FAIL("expected a DegenerateStep error");
  } catch (const covf::Error& err) {
    CHECK(err.code() == covf::errc::degenerate_step);
  }
}
