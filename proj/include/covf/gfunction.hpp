#pragma once

#include <span>

#include "covf/symmat.hpp"

namespace covf::fourier {

// Test functions g: R^d -> S_d applied to normalized increments.
//
//  power_variation  entry (i,j), i < j: |x_i|^r |x_j|^s; diagonal |x_i|^(r+s)
//  cosine_tt        entry (i,j): cos(x_i + 1_{i!=j} x_j)
//  gauss_exp        entry (i,j): exp(-(x_i + 1_{i!=j} x_j)^2 / 2)
//
// The off-diagonal gauss_exp entry is the quadratic form <x, A_ij x>/2 with
// A_ij = e_i e_i' + e_j e_j' + e_i e_j' + e_j e_i'; the diagonal drops the
// doubling, mirroring the cosine convention, so that the moment map has the
// closed inverse below.
enum class GKind { power_variation, cosine_tt, gauss_exp };

struct GFunctionSpec {
  GKind kind;
  int dim;
  double r = 0.0;
  double s = 0.0;

  static GFunctionSpec power(int dim, double r, double s);
  static GFunctionSpec cosine(int dim);
  static GFunctionSpec gauss(int dim);

  // Moment map rho_g available: cosine and gauss everywhere; power only for
  // s = 0 (marginal moments).
  bool has_moment_map() const;
  // Closed inverse of rho_g: cosine and gauss.
  bool has_inverse() const;
};

// Entrywise evaluation of g at a point x in R^d.
SymMatrix eval_g(const GFunctionSpec& spec, std::span<const double> x);

// rho_g(x) = E[g(U)], U ~ N(0, x).
//  cosine_tt: (i,i) -> exp(-x_ii/2); (i,j) -> exp(-(x_ii + 2x_ij + x_jj)/2)
//  gauss_exp: (i,i) -> 1/sqrt(x_ii + 1); (i,j) -> 1/sqrt(x_ii + 2x_ij + x_jj + 1)
//  power(r,0): every entry m_r * x_ii^(r/2) (marginal of the row index)
SymMatrix rho_g(const GFunctionSpec& spec, const SymMatrix& x);

// Entrywise second moment map E[g_ij(U)^2]; used for CLT variance targets.
SymMatrix rho_gg(const GFunctionSpec& spec, const SymMatrix& x);

// Closed inverse of rho_g for cosine_tt and gauss_exp. Domain is (0, 1];
// entries <= 0 or > 1 + 1e-10 raise OutOfDomain (clamping is the caller's
// policy). Round-trips rho_g exactly up to floating point.
SymMatrix rho_g_inverse(const GFunctionSpec& spec, const SymMatrix& v);

// Scalar inverse of the diagonal moment map, x_ii from v = rho_g(x)_ii.
// Defined for cosine_tt, gauss_exp and power(r,0); used when only diagonal
// spot values are wanted (e.g. the squared-increment estimator).
double rho_g_inverse_diagonal(const GFunctionSpec& spec, double v);

}  // namespace covf::fourier
