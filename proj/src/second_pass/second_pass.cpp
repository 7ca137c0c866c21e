#include "covf/second_pass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "covf/error.hpp"
#include "covf/special.hpp"

namespace covf::second_pass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Leverage vectors are kept strictly inside the unit disk so the 2F1
// argument stays bounded away from its radius of convergence.
constexpr double kDiskMargin = 1e-7;

double coarse_rate(std::span<const double> values, double horizon) {
  require(values.size() >= 2, errc::empty_path,
          "need at least two points on the coarse grid");
  return static_cast<double>(values.size() - 1) / horizon;
}

double mean_diag_power(std::span<const double> series, double exponent) {
  // (1/m) sum_{p=1..m} v_p^exponent; tiny negative values (inversion
  // round-off) are treated as zero, anything lower is an error.
  double sum = 0.0;
  for (std::size_t p = 1; p < series.size(); ++p) {
    double v = series[p];
    if (v < 0.0) {
      require(v >= -1e-8, errc::negative_diagonal,
              "diagonal spot values must be nonnegative");
      v = 0.0;
    }
    sum += std::pow(v, exponent);
  }
  return sum / static_cast<double>(series.size() - 1);
}

}  // namespace

long long SecondPassConfig::coarse_count(long long n_fine) const {
  if (m > 0) return m;
  require(iota > 0.0 && iota < 1.0, errc::invalid_params,
          "iota must lie in (0, 1)");
  require(k_tilde > 0.0, errc::invalid_params, "k_tilde must be positive");
  const double raw = k_tilde * std::pow(static_cast<double>(n_fine), iota);
  return std::max<long long>(2, std::llround(raw));
}

double SecondPassConfig::diag_power(int component) const {
  for (int c : jumping_components) {
    if (c == component) return r_diag;
  }
  return r_offdiag;
}

double power_variation(std::span<const double> values, double r,
                       double horizon) {
  require(r > 0.0, errc::invalid_params, "power variation requires r > 0");
  const double rate = coarse_rate(values, horizon);
  const double sqrt_rate = std::sqrt(rate);
  double sum = 0.0;
  for (std::size_t p = 1; p < values.size(); ++p) {
    sum += std::pow(std::abs(sqrt_rate * (values[p] - values[p - 1])), r);
  }
  return sum / rate;
}

double cross_power_variation(std::span<const double> x_values,
                             const SampledPath& y, int component, double r,
                             double s, double horizon) {
  require(component >= 0 && component < y.dim(), errc::invalid_params,
          "component index out of range");
  require(r >= 0.0 && s >= 0.0, errc::invalid_params,
          "powers must be nonnegative");
  const double rate = coarse_rate(x_values, horizon);
  const std::size_t m = x_values.size() - 1;
  const long long n = y.grid().samples_per_unit();
  require(rate <= static_cast<double>(n) * (1.0 + 1e-9), errc::grid_mismatch,
          "coarse grid is finer than the observation grid");

  // Nearest fine-grid index for each coarse time p*T/m.
  std::vector<double> y_sub(m + 1);
  const long long max_index = y.grid().steps();
  for (std::size_t p = 0; p <= m; ++p) {
    const double t = horizon * static_cast<double>(p) / static_cast<double>(m);
    const long long idx = std::llround(t * static_cast<double>(n));
    require(idx >= 0 && idx <= max_index, errc::grid_mismatch,
            "coarse grid point falls outside the observation window");
    y_sub[p] = y.value(idx, component);
  }

  const double sqrt_rate = std::sqrt(rate);
  double sum = 0.0;
  for (std::size_t p = 1; p <= m; ++p) {
    const double dx = std::abs(sqrt_rate * (x_values[p] - x_values[p - 1]));
    const double dy = std::abs(sqrt_rate * (y_sub[p] - y_sub[p - 1]));
    sum += std::pow(dx, r) * std::pow(dy, s);
  }
  return sum / rate;
}

double pv12_model(const SymMatrixPath& x_path, double a11, double a12,
                  double a22, double r, long long* clamped) {
  require(x_path.dim() >= 2, errc::invalid_params,
          "pv12 needs a bivariate covariance path");
  require(r > 0.0, errc::invalid_params, "pv12 requires r > 0");
  long long clamp_count = 0;
  double sum = 0.0;
  const std::size_t count = x_path.size();
  require(count >= 2, errc::empty_path, "coarse path too short");
  for (std::size_t p = 1; p < count; ++p) {
    double combo = a11 * x_path.entry(p, 0, 0) + 2.0 * a12 * x_path.entry(p, 0, 1) +
                   a22 * x_path.entry(p, 1, 1);
    if (combo < 0.0) {
      combo = 0.0;
      ++clamp_count;
    }
    sum += std::pow(combo, 0.5 * r);
  }
  if (clamped) *clamped = clamp_count;
  return gaussian_abs_moment(r) * sum / static_cast<double>(count - 1);
}

double pc_model(const SymMatrixPath& x_path, const SymMatrix& alpha,
                std::span<const double> rho, int component, double r,
                double s) {
  const int d = alpha.dim();
  require(x_path.dim() == d, errc::invalid_params, "dimension mismatch");
  require(static_cast<int>(rho.size()) == d, errc::invalid_params,
          "rho has wrong dimension");
  require(component >= 0 && component < d, errc::invalid_params,
          "component index out of range");
  const double a_ii = alpha(component, component);
  require(a_ii > 0.0, errc::degenerate_alpha,
          "alpha has a nonpositive diagonal entry");

  const SymMatrix root = matrix_sqrt_psd(alpha);
  double root_rho_i = 0.0;
  for (int j = 0; j < d; ++j) root_rho_i += root(component, j) * rho[j];
  const double corr2 = std::min(1.0, root_rho_i * root_rho_i / a_ii);

  const std::size_t count = x_path.size();
  require(count >= 2, errc::empty_path, "coarse path too short");
  double mean_pow = 0.0;
  for (std::size_t p = 1; p < count; ++p) {
    mean_pow += std::pow(std::max(0.0, x_path.entry(p, component, component)),
                         0.5 * (r + s));
  }
  mean_pow /= static_cast<double>(count - 1);

  return bivariate_abs_moment(r, s, std::sqrt(corr2)) *
         std::pow(4.0 * a_ii, 0.5 * r) * mean_pow;
}

double alpha_diag_from_power_variation(double pv_value, double mean_pow,
                                       double r) {
  require(r > 0.0, errc::invalid_params, "requires r > 0");
  require(pv_value >= 0.0, errc::invalid_params,
          "power variation value must be nonnegative");
  require(mean_pow > 0.0, errc::negative_diagonal,
          "mean diagonal power must be positive");
  const double denom =
      std::tgamma(0.5 * (r + 1.0)) / std::sqrt(std::numbers::pi) * mean_pow;
  return 0.125 * std::pow(pv_value / denom, 2.0 / r);
}

AlphaEstimate fit_alpha12(double v12_target, const SymMatrixPath& x_path,
                          double a11, double a22, double r) {
  require(a11 >= 0.0 && a22 >= 0.0, errc::invalid_params,
          "diagonal alpha estimates must be nonnegative");
  const double bound = std::sqrt(a11 * a22);

  const auto objective = [&](double a12) {
    const double model = pv12_model(x_path, a11, a12, a22, r);
    const double diff = model - v12_target;
    return diff * diff;
  };

  // Bracket with a coarse scan; the model is monotone in a12 only when the
  // off-diagonal path has a constant sign, so do not rely on unimodality.
  constexpr int scan_points = 41;
  double best_a = -bound;
  double best_f = kInf;
  for (int i = 0; i < scan_points; ++i) {
    const double a = -bound + 2.0 * bound * i / (scan_points - 1);
    const double f = objective(a);
    if (f < best_f) {
      best_f = f;
      best_a = a;
    }
  }

  const double step = bound > 0.0 ? 2.0 * bound / (scan_points - 1) : 0.0;
  double lo = std::max(-bound, best_a - step);
  double hi = std::min(bound, best_a + step);

  constexpr double golden = 0.6180339887498949;
  long long iterations = 0;
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-10 && iterations < 200) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = objective(x2);
    }
    ++iterations;
  }
  const double a12 = 0.5 * (lo + hi);
  return AlphaEstimate{a11, a12, a22, objective(a12), iterations};
}

namespace {

struct RhoObjective {
  // PC_i(rho) = const_i * 2F1(-r/2, -s/2; 1/2; corr2_i(rho)); everything
  // not depending on rho is precomputed.
  std::array<double, 2> constant;
  std::array<std::array<double, 2>, 2> root_rows;  // rows of sqrt(alpha)
  std::array<double, 2> inv_a_diag;
  std::array<double, 2> targets;
  double r, s;

  double operator()(const std::array<double, 2>& rho) const {
    const double norm2 = rho[0] * rho[0] + rho[1] * rho[1];
    if (norm2 > 1.0 - kDiskMargin) return kInf;
    double total = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double proj = root_rows[i][0] * rho[0] + root_rows[i][1] * rho[1];
      const double corr2 = std::min(1.0, proj * proj * inv_a_diag[i]);
      const double model =
          constant[i] * hyp2f1(-0.5 * r, -0.5 * s, 0.5, corr2);
      const double diff = model - targets[i];
      total += diff * diff;
    }
    return total;
  }
};

}  // namespace

RhoEstimate fit_rho(const std::array<double, 2>& pc_targets,
                    const SymMatrixPath& x_path, const SymMatrix& alpha,
                    double r, double s) {
  require(alpha.dim() == 2 && x_path.dim() == 2, errc::invalid_params,
          "leverage fit is defined for the bivariate model");
  require(x_path.size() >= 2, errc::empty_path, "coarse path too short");

  RhoObjective objective{};
  objective.r = r;
  objective.s = s;
  objective.targets = pc_targets;
  const SymMatrix root = matrix_sqrt_psd(alpha);
  for (int i = 0; i < 2; ++i) {
    const double a_ii = alpha(i, i);
    require(a_ii > 0.0, errc::degenerate_alpha,
            "alpha has a nonpositive diagonal entry");
    objective.root_rows[i] = {root(i, 0), root(i, 1)};
    objective.inv_a_diag[i] = 1.0 / a_ii;
    double mean_pow = 0.0;
    for (std::size_t p = 1; p < x_path.size(); ++p) {
      mean_pow += std::pow(std::max(0.0, x_path.entry(p, i, i)), 0.5 * (r + s));
    }
    mean_pow /= static_cast<double>(x_path.size() - 1);
    const double prefactor = std::pow(2.0, 0.5 * (r + s)) *
                             std::tgamma(0.5 * (r + 1.0)) *
                             std::tgamma(0.5 * (s + 1.0)) / std::numbers::pi;
    objective.constant[i] = prefactor * std::pow(4.0 * a_ii, 0.5 * r) * mean_pow;
  }

  // 41 x 41 scan; ties resolved to the lexicographically smallest candidate
  // by the strict comparison and ascending visit order. The objective is
  // even under a global sign flip of rho, so this picks one branch
  // deterministically.
  constexpr int grid_points = 41;
  std::array<double, 2> best{0.0, 0.0};
  double best_f = kInf;
  for (int i = 0; i < grid_points; ++i) {
    const double rho1 = -1.0 + 2.0 * i / (grid_points - 1);
    for (int j = 0; j < grid_points; ++j) {
      const double rho2 = -1.0 + 2.0 * j / (grid_points - 1);
      const std::array<double, 2> candidate{rho1, rho2};
      const double f = objective(candidate);
      if (f < best_f) {
        best_f = f;
        best = candidate;
      }
    }
  }
  require(best_f < kInf, errc::solver_failure,
          "no feasible point found on the leverage grid");

  // Nelder-Mead refinement with standard coefficients.
  const double spacing = 2.0 / (grid_points - 1);
  std::array<std::array<double, 2>, 3> simplex{
      best,
      std::array<double, 2>{best[0] + spacing, best[1]},
      std::array<double, 2>{best[0], best[1] + spacing}};
  std::array<double, 3> fvals{};
  for (int v = 0; v < 3; ++v) fvals[v] = objective(simplex[v]);

  long long iterations = 0;
  constexpr long long max_iterations = 500;
  while (iterations < max_iterations) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fvals[a] < fvals[b]; });
    const auto& lowest = simplex[order[0]];
    const auto& second = simplex[order[1]];
    const int worst = order[2];

    const double diameter =
        std::max(std::hypot(simplex[worst][0] - lowest[0],
                            simplex[worst][1] - lowest[1]),
                 std::hypot(second[0] - lowest[0], second[1] - lowest[1]));
    if (diameter < 1e-8) break;

    const std::array<double, 2> centroid{0.5 * (lowest[0] + second[0]),
                                         0.5 * (lowest[1] + second[1])};
    const auto blend = [&](double coef) {
      return std::array<double, 2>{
          centroid[0] + coef * (centroid[0] - simplex[worst][0]),
          centroid[1] + coef * (centroid[1] - simplex[worst][1])};
    };

    const auto reflected = blend(1.0);
    const double f_reflected = objective(reflected);
    if (f_reflected < fvals[order[0]]) {
      const auto expanded = blend(2.0);
      const double f_expanded = objective(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        fvals[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        fvals[worst] = f_reflected;
      }
    } else if (f_reflected < fvals[order[1]]) {
      simplex[worst] = reflected;
      fvals[worst] = f_reflected;
    } else {
      const auto contracted = blend(f_reflected < fvals[worst] ? 0.5 : -0.5);
      const double f_contracted = objective(contracted);
      if (f_contracted < std::min(f_reflected, fvals[worst])) {
        simplex[worst] = contracted;
        fvals[worst] = f_contracted;
      } else {
        for (int v = 1; v < 3; ++v) {
          const int idx = order[v];
          simplex[idx] = {0.5 * (simplex[idx][0] + lowest[0]),
                          0.5 * (simplex[idx][1] + lowest[1])};
          fvals[idx] = objective(simplex[idx]);
        }
      }
    }
    ++iterations;
  }

  int best_vertex = 0;
  for (int v = 1; v < 3; ++v) {
    if (fvals[v] < fvals[best_vertex]) best_vertex = v;
  }
  require(fvals[best_vertex] <= best_f, errc::solver_failure,
          "refinement did not reach the grid-scan minimum");
  return RhoEstimate{simplex[best_vertex], fvals[best_vertex], iterations};
}

AlphaEstimate estimate_alpha(const SymMatrixPath& xhat,
                             const SecondPassConfig& config) {
  require(xhat.dim() == 2, errc::invalid_params,
          "the second pass targets the bivariate model");
  require(xhat.size() >= 3, errc::empty_path,
          "coarse path too short for the second pass");
  const double horizon = xhat.times().back();

  double a_diag[2];
  for (int i = 0; i < 2; ++i) {
    const double r = config.diag_power(i);
    const auto series = xhat.entry_series(i, i);
    const double pv = power_variation(series, r, horizon);
    const double mean_pow = mean_diag_power(series, 0.5 * r);
    a_diag[i] = alpha_diag_from_power_variation(pv, mean_pow, r);
  }

  const auto series12 = xhat.entry_series(0, 1);
  const double v12 = power_variation(series12, config.r_offdiag, horizon);
  return fit_alpha12(v12, xhat, a_diag[0], a_diag[1], config.r_offdiag);
}

RhoEstimate estimate_rho(const SymMatrixPath& xhat, const SampledPath& y,
                         const SymMatrix& alpha_hat,
                         const SecondPassConfig& config) {
  require(xhat.dim() == 2 && y.dim() == 2, errc::invalid_params,
          "the second pass targets the bivariate model");
  const double horizon = xhat.times().back();
  std::array<double, 2> targets{};
  for (int i = 0; i < 2; ++i) {
    targets[i] = cross_power_variation(xhat.entry_series(i, i), y, i,
                                       config.r_cross, config.s_cross, horizon);
  }
  return fit_rho(targets, xhat, alpha_hat, config.r_cross, config.s_cross);
}

std::vector<double> covcov_estimator(const SymMatrixPath& xhat, double r,
                                     double s, bool signed_product,
                                     double horizon) {
  const std::size_t count = xhat.size();
  require(count >= 2, errc::empty_path, "coarse path too short");
  const int packed = xhat.packed_size();
  const double rate = static_cast<double>(count - 1) / horizon;
  const double sqrt_rate = std::sqrt(rate);

  std::vector<double> tensor(static_cast<std::size_t>(packed) * packed, 0.0);
  std::vector<double> delta(packed);
  for (std::size_t p = 1; p < count; ++p) {
    const auto current = xhat.packed_at(p);
    const auto previous = xhat.packed_at(p - 1);
    for (int e = 0; e < packed; ++e) {
      delta[e] = sqrt_rate * (current[e] - previous[e]);
    }
    for (int e = 0; e < packed; ++e) {
      for (int f = 0; f < packed; ++f) {
        const double term =
            signed_product
                ? delta[e] * delta[f]
                : std::pow(std::abs(delta[e]), r) * std::pow(std::abs(delta[f]), s);
        tensor[static_cast<std::size_t>(e) * packed + f] += term;
      }
    }
  }
  for (double& v : tensor) v /= rate;
  return tensor;
}

SymMatrixPath subsample_to_coarse_grid(const SymMatrixPath& xhat, long long m,
                                       double horizon) {
  require(m >= 1, errc::invalid_params, "coarse count must be >= 1");
  require(static_cast<std::size_t>(m) < xhat.size(), errc::grid_mismatch,
          "coarse grid must be coarser than the reconstruction grid");
  const std::size_t source = xhat.size() - 1;
  const int packed = xhat.packed_size();
  std::vector<double> times(m + 1);
  std::vector<double> values(static_cast<std::size_t>(m + 1) * packed);
  for (long long p = 0; p <= m; ++p) {
    const double t = horizon * static_cast<double>(p) / static_cast<double>(m);
    const auto idx = static_cast<std::size_t>(std::llround(
        static_cast<double>(p) * static_cast<double>(source) / static_cast<double>(m)));
    times[p] = t;
    const auto src = xhat.packed_at(idx);
    std::copy(src.begin(), src.end(),
              values.begin() + static_cast<std::size_t>(p) * packed);
  }
  return SymMatrixPath(std::move(times), xhat.dim(), std::move(values));
}

}  // namespace covf::second_pass
