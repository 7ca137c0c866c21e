#pragma once

#include <complex>
#include <span>
#include <vector>

#include "covf/gfunction.hpp"
#include "covf/paths.hpp"

namespace covf::fourier {

// Estimated Fourier coefficients of t -> rho_g(X_t): for k = -N..N a
// complex d x d symmetric matrix, stored packed. Coefficients from real
// data satisfy coeff(-k) = conj(coeff(k)) exactly by construction.
class FourierCoefficients {
 public:
  FourierCoefficients(int mode_count, double horizon, int dim,
                      std::vector<std::complex<double>> packed);

  int mode_count() const { return n_modes_; }
  double horizon() const { return horizon_; }
  int dim() const { return dim_; }
  int packed_size() const { return dim_ * (dim_ + 1) / 2; }

  std::complex<double> coeff(int k, int i, int j) const;
  std::span<const std::complex<double>> packed_at(int k) const;

 private:
  int n_modes_;
  double horizon_;
  int dim_;
  std::vector<std::complex<double>> data_;  // (2N+1) x packed, k = -N..N
};

// V(Y,g,k) = (1/n) sum_m exp(-i 2pi k t_{m-1} / T) g(sqrt(n) dY_m) for
// k = -N..N; k >= 0 is computed (fixed ascending m, compensated sums) and
// k < 0 filled by conjugate symmetry.
FourierCoefficients fourier_coefficients(const SampledPath& y,
                                         const GFunctionSpec& g,
                                         int mode_count);

// Fejer kernel with weights (1 - |k|/N): sum_{|k|<=N} (1-|k|/N) e^{ikx},
// in closed form (1/N) sin^2(Nx/2) / sin^2(x/2); F_N(0) = N.
double fejer_kernel(double x, int mode_count);

// Spectral Fejer sum (1/T) sum_k (1-|k|/N) e^{i 2pi k t / T} coeff(k) at
// each evaluation time. Imaginary residue above 1e-9 relative is an
// ImaginaryResidue error (broken conjugate symmetry upstream).
SymMatrixPath fejer_reconstruct(const FourierCoefficients& coeffs,
                                std::span<const double> eval_times);

// Evaluation grid t_j = j T / (2N), j = 0..2N (both endpoints included).
std::vector<double> fejer_eval_times(double horizon, int mode_count);

enum class ClampPolicy { error_on_domain, clamp_to_eps };

struct SpotEstimate {
  SymMatrixPath rho_path;  // reconstructed rho_g(X) values
  SymMatrixPath x_path;    // after moment-map inversion
  long long clamp_count;   // entries clamped before inversion
  std::vector<long long> clamped_per_time;
};

// Full spot pipeline: coefficients -> Fejer reconstruction on the 2N+1
// grid -> moment-map inversion per point. Requires an invertible g
// (cosine_tt or gauss_exp). Under clamp_to_eps, reconstructed entries <= 0
// are replaced by eps before inversion and counted.
SpotEstimate estimate_spot_covariance(const SampledPath& y,
                                      const GFunctionSpec& g, int mode_count,
                                      ClampPolicy policy, double eps = 1e-10);

// Mode count from the rate condition n / N^gamma -> K:
// N = round((n/K)^(1/gamma)), floored at 1 and capped at floor(n*T).
int select_mode_count(long long n, double gamma, double rate_constant,
                      double horizon = 1.0);

}  // namespace covf::fourier
