#pragma once

#include <cstdint>
#include <vector>

#include "covf/paths.hpp"
#include "covf/symmat.hpp"

namespace covf::sim {

// Parameters of the two-driver affine jump-diffusion:
//   dY_i = (-X_ii/2 - lambda_y_i (e^{mu_i - sigma_i^2/2} - 1)) dt
//          + (sqrt(X) dZ)_i + compound Poisson(lambda_y_i) Gaussian marks,
//   dX   = (b + M X + X M') dt + sqrt(X) dB Sigma + Sigma dB' sqrt(X)
//          + compound Poisson(lambda_x11) exponential marks on entry (1,1),
//   Z    = sqrt(1 - rho'rho) W + B rho,  Sigma = sqrt(alpha).
struct BatesParams {
  int dim = 0;
  std::vector<double> y0;
  SymMatrix x0{1};
  std::vector<double> mean_reversion;  // d x d row-major M
  SymMatrix alpha{1};                  // Sigma^2
  SymMatrix affine_level{1};           // b
  std::vector<double> rho;             // leverage, rho'rho <= 1
  std::vector<double> lambda_y;        // per-component jump intensities
  std::vector<double> jump_mu;
  std::vector<double> jump_sigma;
  double lambda_x11 = 0.0;             // intensity of the (1,1) variance jumps
  double theta = 1.0;                  // mean of the exponential marks

  // Checks dimensions, PSD of alpha / x0, b - (d-1) alpha PSD, the leverage
  // disk constraint and sign conditions.
  void validate() const;
};

struct JumpEvent {
  double time;
  int component;  // Y component; 0 for the (1,1) covariance entry
  double mark;
};

struct SimOutput {
  SampledPath y_path;
  SymMatrixPath x_path;  // same fine grid, PSD after projection
  std::vector<JumpEvent> y_jumps;
  std::vector<JumpEvent> x_jumps;
  long long psd_clip_count = 0;   // steps on which clipping occurred
  double max_clip_fraction = 0.0; // worst clipped mass / trace in one step
};

// Euler-Maruyama with left-endpoint coefficients; per step the order of
// draws is fixed (dB row-major, dW, X jump count + marks, then per
// component the Y jump count + marks), so a seed pins the whole output.
SimOutput simulate_bates(const BatesParams& params, const TimeGrid& grid,
                         std::uint64_t seed);

// Subtracts the recorded jump marks cumulatively from Y and from the (1,1)
// covariance entry, leaving the continuous parts.
SimOutput strip_jumps(const SimOutput& output);

}  // namespace covf::sim
