#include "covf/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "covf/baseline.hpp"
#include "covf/error.hpp"
#include "covf/parallel.hpp"
#include "covf/rng.hpp"
#include "covf/special.hpp"

namespace covf::mc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Metric make_ratio_metric(const std::string& name, double value, double target,
                         double se, double tolerance) {
  Metric m;
  m.name = name;
  m.value = value;
  m.target = target;
  m.ci_lo = value - 1.96 * se;
  m.ci_hi = value + 1.96 * se;
  m.pass = std::abs(value - target) <= tolerance * std::abs(target);
  return m;
}

Metric make_zero_metric(const std::string& name, double value, double se) {
  Metric m;
  m.name = name;
  m.value = value;
  m.target = 0.0;
  m.ci_lo = value - 1.96 * se;
  m.ci_hi = value + 1.96 * se;
  m.pass = std::abs(value) <= 3.0 * se;
  return m;
}

bool all_pass(const std::vector<Metric>& metrics) {
  for (const auto& m : metrics) {
    if (!m.pass) return false;
  }
  return true;
}

// d/dv of the scalar diagonal moment-map inverse at v.
double diagonal_inverse_derivative(const fourier::GFunctionSpec& g, double v) {
  switch (g.kind) {
    case fourier::GKind::cosine_tt:
      return -2.0 / v;
    case fourier::GKind::gauss_exp:
      return -2.0 / (v * v * v);
    case fourier::GKind::power_variation: {
      const double m_r = gaussian_abs_moment(g.r);
      return (2.0 / g.r) * std::pow(v / m_r, 2.0 / g.r - 1.0) / m_r;
    }
  }
  fail(errc::unsupported, "unknown g-function kind");
}

}  // namespace

std::vector<double> ExperimentReport::column(std::size_t column) const {
  std::vector<double> out(replications);
  for (long long rep = 0; rep < replications; ++rep) out[rep] = stat(rep, column);
  return out;
}

DesignPath simulate_design(const Design& design, long long n,
                           std::uint64_t seed) {
  const TimeGrid grid(n, design.horizon);
  const long long steps = grid.steps();
  const int d = design.x.dim();
  Rng rng(seed);

  if (design.kind == Design::Kind::constant_x) {
    const SymMatrix root = matrix_sqrt_psd(design.x);
    const double sqrt_h = std::sqrt(grid.dt());
    std::vector<double> values(static_cast<std::size_t>(steps + 1) * d, 0.0);
    std::vector<double> z(d);
    for (long long m = 1; m <= steps; ++m) {
      rng.fill_normal(z);
      for (int i = 0; i < d; ++i) {
        double dy = 0.0;
        for (int j = 0; j < d; ++j) dy += root(i, j) * z[j];
        values[static_cast<std::size_t>(m) * d + i] =
            values[static_cast<std::size_t>(m - 1) * d + i] + sqrt_h * dy;
      }
    }
    return DesignPath{SampledPath(grid, d, std::move(values)),
                      std::vector<double>(steps + 1, design.x(0, 0))};
  }

  require(d == 1, errc::invalid_params, "the Heston design is one-dimensional");
  const double h = grid.dt();
  const double sqrt_h = std::sqrt(h);
  const double orth = std::sqrt(std::max(0.0, 1.0 - design.leverage * design.leverage));
  std::vector<double> y(steps + 1, 0.0);
  std::vector<double> spot(steps + 1, design.x(0, 0));
  double x = design.x(0, 0);
  for (long long m = 1; m <= steps; ++m) {
    const double db = sqrt_h * rng.normal();
    const double dw = sqrt_h * rng.normal();
    const double dz = design.leverage * db + orth * dw;
    const double sqrt_x = std::sqrt(std::max(x, 0.0));
    y[m] = y[m - 1] - 0.5 * x * h + sqrt_x * dz;
    x += design.kappa * (design.level - x) * h + design.vol_of_vol * sqrt_x * db;
    x = std::max(x, 0.0);  // reflect-at-zero truncation of the Euler step
    spot[m] = x;
  }
  return DesignPath{SampledPath(grid, 1, std::move(y)), std::move(spot)};
}

ExperimentReport clt_fourier_experiment(const Design& design,
                                        const fourier::GFunctionSpec& g,
                                        long long n, int mode_count,
                                        long long reps, std::uint64_t seed,
                                        double tolerance) {
  require(design.kind == Design::Kind::constant_x, errc::invalid_params,
          "the coefficient CLT experiment requires the constant-X design");
  require(reps >= 64, errc::invalid_params, "need at least 64 replications");
  const auto start = Clock::now();

  const double horizon = design.horizon;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double rho = fourier::rho_g(g, design.x)(0, 0);
  const double rho2 = fourier::rho_gg(g, design.x)(0, 0);
  const double target_diag = horizon * (rho2 - rho * rho);

  const std::vector<std::string> stat_names = {
      "err0_re",       "err1_re",       "err1_im",
      "abs2_err0",     "abs2_err1",     "cross01_re",
      "cross01_im"};
  std::vector<double> per_rep(static_cast<std::size_t>(reps) * stat_names.size());

  par::parallel_for(0, reps, [&](long long rep) {
    const auto path =
        simulate_design(design, n, Rng::mix(seed, static_cast<std::uint64_t>(rep)));
    const auto coeffs = fourier::fourier_coefficients(path.y, g, mode_count);
    const std::complex<double> e0 =
        sqrt_n * (coeffs.coeff(0, 0, 0) - horizon * rho);
    const std::complex<double> e1 = sqrt_n * coeffs.coeff(1, 0, 0);
    const std::complex<double> cross = e0 * std::conj(e1);
    double* row = &per_rep[static_cast<std::size_t>(rep) * stat_names.size()];
    row[0] = e0.real();
    row[1] = e1.real();
    row[2] = e1.imag();
    row[3] = std::norm(e0);
    row[4] = std::norm(e1);
    row[5] = cross.real();
    row[6] = cross.imag();
  });

  ExperimentReport report;
  report.name = "clt_fourier";
  report.replications = reps;
  report.stat_names = stat_names;
  report.per_rep = std::move(per_rep);

  const auto abs2_err0 = report.column(3);
  const auto abs2_err1 = report.column(4);
  const auto cross_re = report.column(5);
  const auto cross_im = report.column(6);

  report.metrics.push_back(make_ratio_metric(
      "diag_cov_k0", sample_mean(abs2_err0), target_diag,
      jackknife_se_mean(abs2_err0), tolerance));
  report.metrics.push_back(make_ratio_metric(
      "diag_cov_k1", sample_mean(abs2_err1), target_diag,
      jackknife_se_mean(abs2_err1), tolerance));
  report.metrics.push_back(make_zero_metric(
      "cross_cov_01_re", sample_mean(cross_re), jackknife_se_mean(cross_re)));
  report.metrics.push_back(make_zero_metric(
      "cross_cov_01_im", sample_mean(cross_im), jackknife_se_mean(cross_im)));

  report.passed = all_pass(report.metrics);
  report.wall_seconds = elapsed_seconds(start);
  return report;
}

ExperimentReport clt_spot_experiment(const Design& design,
                                     const fourier::GFunctionSpec& g,
                                     long long n, double gamma,
                                     double rate_constant, double t_eval,
                                     long long reps, std::uint64_t seed,
                                     double tolerance) {
  require(design.kind == Design::Kind::constant_x, errc::invalid_params,
          "the spot CLT experiment requires the constant-X design");
  require(reps >= 64, errc::invalid_params, "need at least 64 replications");
  require(t_eval > 0.0 && t_eval < design.horizon, errc::invalid_params,
          "evaluate in the interior of [0, T]");
  const auto start = Clock::now();

  const double horizon = design.horizon;
  const int mode_count = fourier::select_mode_count(n, gamma, rate_constant, horizon);
  const double x_true = design.x(0, 0);
  const double rho = fourier::rho_g(g, design.x)(0, 0);
  const double rho2 = fourier::rho_gg(g, design.x)(0, 0);
  const double rho_var = (2.0 / 3.0) * (rho2 - rho * rho);
  const double slope = diagonal_inverse_derivative(g, rho);
  const double spot_var_target = rho_var * slope * slope;
  const double local_var_target = 2.0 * x_true * x_true;
  const double scale = std::sqrt(static_cast<double>(n) * horizon / mode_count);

  const std::vector<std::string> stat_names = {"rho_err", "spot_err", "local_err"};
  std::vector<double> per_rep(static_cast<std::size_t>(reps) * stat_names.size());

  par::parallel_for(0, reps, [&](long long rep) {
    const auto path =
        simulate_design(design, n, Rng::mix(seed, static_cast<std::uint64_t>(rep)));
    const auto coeffs = fourier::fourier_coefficients(path.y, g, mode_count);
    const double times[1] = {t_eval};
    const auto rho_path = fourier::fejer_reconstruct(coeffs, times);
    const double rho_hat = rho_path.entry(0, 0, 0);
    const double x_hat = fourier::rho_g_inverse_diagonal(g, rho_hat);

    const auto local = baseline::local_spot_estimator(path.y, mode_count);
    const double local_hat =
        local.values.entry(baseline::local_block_index(local, t_eval), 0, 0);

    double* row = &per_rep[static_cast<std::size_t>(rep) * stat_names.size()];
    row[0] = scale * (rho_hat - rho);
    row[1] = scale * (x_hat - x_true);
    row[2] = scale * (local_hat - x_true);
  });

  ExperimentReport report;
  report.name = "clt_spot";
  report.replications = reps;
  report.stat_names = stat_names;
  report.per_rep = std::move(per_rep);

  const auto rho_err = report.column(0);
  const auto spot_err = report.column(1);
  const auto local_err = report.column(2);

  const double spot_var = sample_variance(spot_err);
  const double local_var = sample_variance(local_err);
  report.metrics.push_back(make_ratio_metric("rho_err_var",
                                             sample_variance(rho_err), rho_var,
                                             jackknife_se_variance(rho_err),
                                             tolerance));
  report.metrics.push_back(make_ratio_metric("spot_err_var", spot_var,
                                             spot_var_target,
                                             jackknife_se_variance(spot_err),
                                             tolerance));
  report.metrics.push_back(make_ratio_metric("local_err_var", local_var,
                                             local_var_target,
                                             jackknife_se_variance(local_err),
                                             tolerance));
  // Variance ratio; the jackknife SE treats the paired per-rep errors.
  {
    const double ratio = spot_var / local_var;
    const double target = spot_var_target / local_var_target;
    const long long count = reps;
    std::vector<double> loo(count);
    double sum_s = 0.0, sumsq_s = 0.0, sum_l = 0.0, sumsq_l = 0.0;
    for (long long i = 0; i < count; ++i) {
      sum_s += spot_err[i];
      sumsq_s += spot_err[i] * spot_err[i];
      sum_l += local_err[i];
      sumsq_l += local_err[i] * local_err[i];
    }
    for (long long i = 0; i < count; ++i) {
      const double ms = (sum_s - spot_err[i]) / (count - 1);
      const double ml = (sum_l - local_err[i]) / (count - 1);
      const double vs =
          (sumsq_s - spot_err[i] * spot_err[i] - (count - 1) * ms * ms) /
          (count - 2);
      const double vl =
          (sumsq_l - local_err[i] * local_err[i] - (count - 1) * ml * ml) /
          (count - 2);
      loo[i] = vs / vl;
    }
    double loo_mean = 0.0;
    for (double v : loo) loo_mean += v;
    loo_mean /= static_cast<double>(count);
    double se2 = 0.0;
    for (double v : loo) se2 += (v - loo_mean) * (v - loo_mean);
    const double se = std::sqrt(se2 * (count - 1) / static_cast<double>(count));
    report.metrics.push_back(
        make_ratio_metric("variance_ratio", ratio, target, se, tolerance));
  }
  report.metrics.push_back(make_zero_metric("rho_err_mean", sample_mean(rho_err),
                                            jackknife_se_mean(rho_err)));

  report.passed = all_pass(report.metrics);
  report.wall_seconds = elapsed_seconds(start);
  return report;
}

ExperimentReport consistency_sweep(const Design& design,
                                   const fourier::GFunctionSpec& g,
                                   std::span<const long long> n_list,
                                   double gamma, double rate_constant,
                                   long long reps, std::uint64_t seed,
                                   double slope_tolerance) {
  require(n_list.size() >= 2, errc::invalid_params,
          "the sweep needs at least two grid sizes");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    require(n_list[i] > n_list[i - 1], errc::invalid_params,
            "grid sizes must be increasing");
  }
  require(reps >= 64, errc::invalid_params, "need at least 64 replications");
  const auto start = Clock::now();

  const double horizon = design.horizon;
  const double t_eval = 0.5 * horizon;

  ExperimentReport report;
  report.name = "consistency_sweep";
  report.replications = reps;
  for (long long n : n_list) report.stat_names.push_back("abs_err_n" + std::to_string(n));
  report.per_rep.assign(static_cast<std::size_t>(reps) * n_list.size(), 0.0);

  std::vector<double> medians(n_list.size());
  for (std::size_t which = 0; which < n_list.size(); ++which) {
    const long long n = n_list[which];
    const int mode_count = fourier::select_mode_count(n, gamma, rate_constant, horizon);
    par::parallel_for(0, reps, [&](long long rep) {
      // Streams depend only on the replication index, so sweep grids reuse
      // the same driving noise at each rep (paired comparisons).
      const auto path = simulate_design(
          design, n, Rng::mix(seed, static_cast<std::uint64_t>(rep)));
      const auto coeffs = fourier::fourier_coefficients(path.y, g, mode_count);
      const double times[1] = {t_eval};
      const auto rho_path = fourier::fejer_reconstruct(coeffs, times);
      const double x_hat =
          fourier::rho_g_inverse_diagonal(g, rho_path.entry(0, 0, 0));
      const long long idx = std::llround(t_eval * static_cast<double>(n));
      const double x_true = path.spot_variance[idx];
      report.per_rep[static_cast<std::size_t>(rep) * n_list.size() + which] =
          std::abs(x_hat - x_true);
    });
    medians[which] = median(report.column(which));
  }

  // OLS slope of log(median error) on log(n).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto count = static_cast<double>(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const double lx = std::log(static_cast<double>(n_list[i]));
    const double ly = std::log(medians[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double target_slope = -(gamma - 1.0) / (2.0 * gamma);

  Metric m;
  m.name = "loglog_slope";
  m.value = slope;
  m.target = target_slope;
  m.ci_lo = slope - slope_tolerance;
  m.ci_hi = slope + slope_tolerance;
  m.pass = std::abs(slope - target_slope) <= slope_tolerance;
  report.metrics.push_back(m);

  bool monotone = true;
  for (std::size_t i = 1; i < medians.size(); ++i) {
    if (medians[i] >= medians[i - 1]) monotone = false;
  }
  Metric mono;
  mono.name = "median_error_decreasing";
  mono.value = monotone ? 1.0 : 0.0;
  mono.target = 1.0;
  mono.ci_lo = mono.ci_hi = mono.value;
  mono.pass = monotone;
  report.metrics.push_back(mono);

  report.passed = all_pass(report.metrics);
  report.wall_seconds = elapsed_seconds(start);
  return report;
}

double sample_mean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  const double mean = sample_mean(values);
  double sum = 0.0;
  for (double v : values) sum += (v - mean) * (v - mean);
  return sum / static_cast<double>(values.size() - 1);
}

double jackknife_se_mean(std::span<const double> values) {
  // For the mean the jackknife SE coincides with sd/sqrt(R).
  const auto count = static_cast<double>(values.size());
  return std::sqrt(sample_variance(values) / count);
}

double jackknife_se_variance(std::span<const double> values) {
  const long long count = static_cast<long long>(values.size());
  require(count >= 3, errc::too_few_points, "need at least 3 values");
  double sum = 0.0, sumsq = 0.0;
  for (double v : values) {
    sum += v;
    sumsq += v * v;
  }
  std::vector<double> loo(count);
  for (long long i = 0; i < count; ++i) {
    const double v = values[i];
    const double m = (sum - v) / (count - 1);
    loo[i] = (sumsq - v * v - (count - 1) * m * m) / (count - 2);
  }
  double loo_mean = 0.0;
  for (double v : loo) loo_mean += v;
  loo_mean /= static_cast<double>(count);
  double se2 = 0.0;
  for (double v : loo) se2 += (v - loo_mean) * (v - loo_mean);
  return std::sqrt(se2 * (count - 1) / static_cast<double>(count));
}

double median(std::vector<double> values) {
  require(!values.empty(), errc::empty_path, "median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t half = values.size() / 2;
  if (values.size() % 2 == 1) return values[half];
  return 0.5 * (values[half - 1] + values[half]);
}

std::string report_summary(const ExperimentReport& report) {
  std::ostringstream out;
  out << "experiment " << report.name << ": " << report.replications
      << " replications, " << report.wall_seconds << " s\n";
  for (const auto& m : report.metrics) {
    out << "  [" << (m.pass ? "pass" : "FAIL") << "] " << m.name << " = "
        << m.value << " (target " << m.target << ", 95% CI [" << m.ci_lo
        << ", " << m.ci_hi << "])\n";
  }
  out << (report.passed ? "  all metrics pass\n" : "  SOME METRICS FAIL\n");
  return out.str();
}

void write_report_text(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), errc::bad_config, "cannot open report file " + path);
  out << report_summary(report);
}

void write_report_csv(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), errc::bad_config, "cannot open report file " + path);
  out << std::setprecision(17);
  out << "rep";
  for (const auto& name : report.stat_names) out << "," << name;
  out << "\n";
  for (long long rep = 0; rep < report.replications; ++rep) {
    out << rep;
    for (std::size_t c = 0; c < report.stat_names.size(); ++c) {
      out << "," << report.stat(rep, c);
    }
    out << "\n";
  }
}

}  // namespace covf::mc
