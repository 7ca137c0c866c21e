#pragma once

// Test-only oracles, independent of the library implementation paths they
// check: adaptive quadrature, a quadrature route to the bivariate absolute
// Gaussian moments, and small random-matrix helpers.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "covf/rng.hpp"
#include "covf/simulate.hpp"
#include "covf/symmat.hpp"

namespace oracles {

inline double adaptive_simpson_impl(const std::function<double(double)>& f,
                                    double a, double b, double fa, double fm,
                                    double fb, double whole, double tol,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("adaptive quadrature depth exhausted");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int depth = 60) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, tol, depth);
}

// E|U|^r |V|^s for a unit-variance pair with correlation corr, by nested
// adaptive quadrature of the density (tails beyond 8.5 sigma are < 1e-16).
// Quadrant splitting keeps the |.|^r kinks on panel edges.
inline double quad_bivariate_abs_moment(double r, double s, double corr) {
  const double limit = 8.5;
  const double det = 1.0 - corr * corr;
  if (det <= 0.0) throw std::runtime_error("need |corr| < 1 for the quadrature oracle");
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));

  const auto inner = [&](double u) {
    const auto integrand = [&](double v) {
      const double q = (u * u - 2.0 * corr * u * v + v * v) / det;
      return std::pow(std::abs(v), s) * std::exp(-0.5 * q);
    };
    return adaptive_simpson(integrand, -limit, 0.0, 1e-14) +
           adaptive_simpson(integrand, 0.0, limit, 1e-14);
  };
  const auto outer = [&](double u) {
    return std::pow(std::abs(u), r) * inner(u);
  };
  const double value = adaptive_simpson(outer, -limit, 0.0, 1e-12) +
                       adaptive_simpson(outer, 0.0, limit, 1e-12);
  return norm * value;
}

// Random symmetric PSD matrix A = B'B with entries of B standard normal.
inline covf::SymMatrix random_psd(int dim, covf::Rng& rng) {
  std::vector<double> b(dim * dim);
  rng.fill_normal(b);
  covf::SymMatrix out(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      double sum = 0.0;
      for (int k = 0; k < dim; ++k) sum += b[k * dim + i] * b[k * dim + j];
      out.set(i, j, sum);
    }
  }
  return out;
}

// Random orthogonal matrix from the QR of a Gaussian matrix (full output).
inline std::vector<double> random_orthogonal(int dim, covf::Rng& rng) {
  std::vector<double> a(dim * dim);
  rng.fill_normal(a);
  // Gram-Schmidt on columns.
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < j; ++k) {
      double dot = 0.0;
      for (int i = 0; i < dim; ++i) dot += a[i * dim + j] * a[i * dim + k];
      for (int i = 0; i < dim; ++i) a[i * dim + j] -= dot * a[i * dim + k];
    }
    double norm = 0.0;
    for (int i = 0; i < dim; ++i) norm += a[i * dim + j] * a[i * dim + j];
    norm = std::sqrt(norm);
    for (int i = 0; i < dim; ++i) a[i * dim + j] /= norm;
  }
  return a;
}

// The two-asset affine jump-diffusion parameter set used across the tests
// and the reference configs (one year of one-minute data at n = 511*250).
inline covf::sim::BatesParams study_params() {
  covf::sim::BatesParams p;
  p.dim = 2;
  p.y0 = {0.0, 0.0};
  p.x0 = covf::SymMatrix::sym2(0.09, -0.036, 0.09);
  p.mean_reversion = {-1.6, -0.2, -0.4, -1.0};
  p.alpha = covf::SymMatrix::sym2(0.0725, 0.06, 0.1325);
  p.affine_level = covf::SymMatrix::sym2(3.5 * 0.0725, 3.5 * 0.06, 3.5 * 0.1325);
  p.rho = {-0.3, -0.5};
  p.lambda_y = {100.0, 100.0};
  p.jump_mu = {-0.005, -0.003};
  p.jump_sigma = {0.015, 0.02};
  p.lambda_x11 = 10.0;
  p.theta = 0.05;
  return p;
}

constexpr long long study_grid_n = 127750;  // 511 * 250 points per year

}  // namespace oracles
