#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "covf/fourier.hpp"
#include "covf/paths.hpp"

namespace covf::mc {

// One verified quantity: the measured value, its target, a 95% jackknife
// interval and the pass verdict at the declared tolerance.
struct Metric {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  long long replications = 0;
  std::vector<std::string> stat_names;  // per-replication columns
  std::vector<double> per_rep;          // replications x stat_names, row-major
  std::vector<Metric> metrics;
  bool passed = false;
  double wall_seconds = 0.0;

  double stat(long long rep, std::size_t column) const {
    return per_rep[static_cast<std::size_t>(rep) * stat_names.size() + column];
  }
  std::vector<double> column(std::size_t column) const;
};

// Synthetic designs the experiments run on.
struct Design {
  enum class Kind { constant_x, heston_1d };
  Kind kind = Kind::constant_x;
  SymMatrix x{1};        // constant covariance, or the Heston initial value
  double horizon = 1.0;
  // Heston parameters (d = 1): dX = kappa (level - X) dt + vol_of_vol sqrt(X) dB
  double kappa = 2.0;
  double level = 0.09;
  double vol_of_vol = 0.3;
  double leverage = -0.5;
};

struct DesignPath {
  SampledPath y;
  std::vector<double> spot_variance;  // X_00 on the same grid
};

DesignPath simulate_design(const Design& design, long long n, std::uint64_t seed);

// Empirical covariance of the Fourier-coefficient errors sqrt(n)(V_k - T F_k)
// in a constant-X design: the k = 0 and k = 1 diagonal against
// T (rho_gg - rho_g^2), the (0,1) cross-covariance against 0.
ExperimentReport clt_fourier_experiment(const Design& design,
                                        const fourier::GFunctionSpec& g,
                                        long long n, int mode_count,
                                        long long reps, std::uint64_t seed,
                                        double tolerance = 0.10);

// Standardized variance of the spot estimators at t_eval: Fourier-Fejer
// against (2/3)(rho_gg - rho_g^2) (delta-method transferred to X for
// invertible g), the block estimator against 2 X^2, and their ratio.
ExperimentReport clt_spot_experiment(const Design& design,
                                     const fourier::GFunctionSpec& g,
                                     long long n, double gamma,
                                     double rate_constant, double t_eval,
                                     long long reps, std::uint64_t seed,
                                     double tolerance = 0.10);

// Median spot error at T/2 versus n; fits the log-log slope against
// -(gamma-1)/(2 gamma) for smooth designs.
ExperimentReport consistency_sweep(const Design& design,
                                   const fourier::GFunctionSpec& g,
                                   std::span<const long long> n_list,
                                   double gamma, double rate_constant,
                                   long long reps, std::uint64_t seed,
                                   double slope_tolerance = 0.08);

// Leave-one-out standard errors; the variance version works from the
// sufficient statistics so the sweep is O(R).
double jackknife_se_mean(std::span<const double> values);
double jackknife_se_variance(std::span<const double> values);
double sample_mean(std::span<const double> values);
double sample_variance(std::span<const double> values);
double median(std::vector<double> values);

void write_report_csv(const ExperimentReport& report, const std::string& path);
void write_report_text(const ExperimentReport& report, const std::string& path);
std::string report_summary(const ExperimentReport& report);

}  // namespace covf::mc
