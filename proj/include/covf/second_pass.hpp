#pragma once

#include <array>
#include <span>
#include <vector>

#include "covf/paths.hpp"
#include "covf/symmat.hpp"

namespace covf::second_pass {

// Powers and coarse-grid settings for the second estimation pass. The
// coarse sample count is m = round(k_tilde * n^iota) unless set explicitly;
// diagonal components listed in jumping_components use r_diag (low power,
// jump robust), everything else uses r_offdiag.
struct SecondPassConfig {
  long long m = 0;  // 0: derive from (iota, k_tilde) and the fine grid
  double iota = 0.2;
  double k_tilde = 1.0;
  double r_diag = 0.25;
  double r_offdiag = 1.0;
  double r_cross = 0.5;
  double s_cross = 0.5;
  std::vector<int> jumping_components = {0};

  long long coarse_count(long long n_fine) const;
  double diag_power(int component) const;
};

// (1/m) sum_p |sqrt(m) (v_p - v_{p-1})|^r over an equidistant grid with
// m = (len-1)/T increments per unit time.
double power_variation(std::span<const double> values, double r,
                       double horizon = 1.0);

// (1/m) sum_p |sqrt(m) dX_p|^r |sqrt(m) dY_p|^s with Y subsampled to the
// coarse grid by nearest fine-grid index.
double cross_power_variation(std::span<const double> x_values,
                             const SampledPath& y, int component, double r,
                             double s, double horizon = 1.0);

// Model-implied limit of the off-diagonal power variation:
//   sqrt(1/pi) 2^(r/2) Gamma((r+1)/2)
//     * (1/m) sum_p (a11 X_11 + 2 a12 X_12 + a22 X_22)_p^(r/2),
// with negative combinations clamped to zero (and counted if requested).
double pv12_model(const SymMatrixPath& x_path, double a11, double a12,
                  double a22, double r, long long* clamped = nullptr);

// Model-implied limit of the cross power variation of (X_ii, Y_i):
//   (1/pi) 2^((r+s)/2) Gamma((r+1)/2) Gamma((s+1)/2)
//     * 2F1(-r/2, -s/2; 1/2; ((sqrt(alpha) rho)_i)^2 / alpha_ii)
//     * (4 alpha_ii)^(r/2) * (1/m) sum_p X_ii,p^((r+s)/2).
double pc_model(const SymMatrixPath& x_path, const SymMatrix& alpha,
                std::span<const double> rho, int component, double r, double s);

// Algebraic inverse of the diagonal power-variation limit:
// alpha_ii = (1/8) (v / (sqrt(1/pi) Gamma((r+1)/2) mean_pow))^(2/r),
// where mean_pow = (1/m) sum_p X_ii,p^(r/2).
double alpha_diag_from_power_variation(double pv_value, double mean_pow,
                                       double r);

struct AlphaEstimate {
  double a11, a12, a22;
  double fit_residual;     // squared residual of the a12 fit at the optimum
  long long iterations;    // golden-section iterations
};

struct RhoEstimate {
  std::array<double, 2> rho;
  double objective;
  long long iterations;  // simplex iterations after the grid scan
};

// Golden-section fit of a12 on [-sqrt(a11 a22), sqrt(a11 a22)] against a
// given power-variation target (a coarse bracketing scan guards against
// non-unimodal objectives).
AlphaEstimate fit_alpha12(double v12_target, const SymMatrixPath& x_path,
                          double a11, double a22, double r);

// Disk-constrained least squares for rho against given cross power
// variation targets: 41 x 41 grid scan with a lexicographic tie-break,
// then Nelder-Mead refinement. The objective is exactly even under
// rho -> -rho, so the tie-break deterministically selects one branch.
RhoEstimate fit_rho(const std::array<double, 2>& pc_targets,
                    const SymMatrixPath& x_path, const SymMatrix& alpha,
                    double r, double s);

// Full second pass on a reconstructed path already on the coarse grid.
AlphaEstimate estimate_alpha(const SymMatrixPath& xhat,
                             const SecondPassConfig& config);
RhoEstimate estimate_rho(const SymMatrixPath& xhat, const SampledPath& y,
                         const SymMatrix& alpha_hat,
                         const SecondPassConfig& config);

// (1/m) sum_p f(sqrt(m) dX_p) accumulated over entry pairs: for pair
// ((i,j),(k,l)) the term is d_ij d_kl when signed_product (quadratic
// covariation), else |d_ij|^r |d_kl|^s. Result is P x P row-major with
// P = d(d+1)/2 packed entries.
std::vector<double> covcov_estimator(const SymMatrixPath& xhat, double r,
                                     double s, bool signed_product,
                                     double horizon = 1.0);

// Nearest-index subsample of a reconstructed path onto the m-grid
// t_p = p T / m, p = 0..m.
SymMatrixPath subsample_to_coarse_grid(const SymMatrixPath& xhat, long long m,
                                       double horizon = 1.0);

}  // namespace covf::second_pass
