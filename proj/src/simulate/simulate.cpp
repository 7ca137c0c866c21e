#include "covf/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "covf/error.hpp"
#include "covf/rng.hpp"

namespace covf::sim {

namespace {

// C = A * B for full row-major d x d buffers.
void mat_mul(int d, const double* a, const double* b, double* c) {
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double sum = 0.0;
      for (int k = 0; k < d; ++k) sum += a[i * d + k] * b[k * d + j];
      c[i * d + j] = sum;
    }
  }
}

}  // namespace

void BatesParams::validate() const {
  require(dim >= 1 && dim <= 8, errc::invalid_params,
          "model dimension must be in 1..8");
  const auto d = static_cast<std::size_t>(dim);
  require(y0.size() == d, errc::invalid_params, "y0 has wrong dimension");
  require(mean_reversion.size() == d * d, errc::invalid_params,
          "mean reversion matrix has wrong dimension");
  require(rho.size() == d, errc::invalid_params, "rho has wrong dimension");
  require(lambda_y.size() == d && jump_mu.size() == d && jump_sigma.size() == d,
          errc::invalid_params, "jump parameter vectors have wrong dimension");
  require(x0.dim() == dim && alpha.dim() == dim && affine_level.dim() == dim,
          errc::invalid_params, "matrix parameters have wrong dimension");

  for (double v : mean_reversion)
    require(std::isfinite(v), errc::invalid_params, "M must be finite");
  require(is_psd(x0), errc::not_psd, "x0 must be positive semidefinite");
  require(is_psd(alpha), errc::not_psd, "alpha must be positive semidefinite");

  SymMatrix drift_gap = affine_level;
  SymMatrix scaled_alpha = alpha;
  scaled_alpha *= -static_cast<double>(dim - 1);
  drift_gap += scaled_alpha;
  require(is_psd(drift_gap), errc::invalid_params,
          "b - (d-1) alpha must be positive semidefinite");

  double rho_norm2 = 0.0;
  for (double v : rho) {
    require(v >= -1.0 && v <= 1.0, errc::invalid_params,
            "rho components must lie in [-1, 1]");
    rho_norm2 += v * v;
  }
  require(rho_norm2 <= 1.0 + 1e-12, errc::invalid_params,
          "rho must satisfy rho'rho <= 1");

  for (std::size_t i = 0; i < d; ++i) {
    require(lambda_y[i] >= 0.0, errc::invalid_params,
            "jump intensities must be nonnegative");
    require(std::isfinite(jump_mu[i]), errc::invalid_params,
            "jump means must be finite");
    require(jump_sigma[i] > 0.0, errc::invalid_params,
            "jump standard deviations must be positive");
  }
  require(lambda_x11 >= 0.0, errc::invalid_params,
          "covariance jump intensity must be nonnegative");
  require(theta > 0.0, errc::invalid_params,
          "exponential mark mean must be positive");
}

SimOutput simulate_bates(const BatesParams& params, const TimeGrid& grid,
                         std::uint64_t seed) {
  params.validate();
  require(grid.samples_per_unit() >= 100, errc::invalid_params,
          "grid too coarse for the Euler scheme (need n >= 100)");

  const int d = params.dim;
  const long long steps = grid.steps();
  const double h = grid.dt();
  const double sqrt_h = std::sqrt(h);

  const SymMatrix sigma = matrix_sqrt_psd(params.alpha);
  std::vector<double> sigma_full(d * d);
  sigma.to_full(sigma_full);

  double rho_norm2 = 0.0;
  for (double v : params.rho) rho_norm2 += v * v;
  const double orth_weight = std::sqrt(std::max(0.0, 1.0 - rho_norm2));

  // Per-component martingale compensator of the Y jumps, as modelled.
  std::vector<double> jump_compensator(d);
  for (int i = 0; i < d; ++i) {
    jump_compensator[i] =
        params.lambda_y[i] *
        (std::exp(params.jump_mu[i] - 0.5 * params.jump_sigma[i] * params.jump_sigma[i]) - 1.0);
  }

  Rng rng(seed);

  const int packed = d * (d + 1) / 2;
  std::vector<double> y_values(static_cast<std::size_t>(steps + 1) * d);
  std::vector<double> x_values(static_cast<std::size_t>(steps + 1) * packed);
  std::vector<double> x_times(steps + 1);

  std::copy(params.y0.begin(), params.y0.end(), y_values.begin());
  std::copy(params.x0.packed().begin(), params.x0.packed().end(), x_values.begin());

  std::vector<JumpEvent> y_jumps, x_jumps;
  long long clip_count = 0;
  double max_clip_fraction = 0.0;

  SymMatrix x_left = params.x0;
  std::vector<double> db(d * d), dw(d), dz(d);
  std::vector<double> x_left_full(d * d), root_full(d * d);
  std::vector<double> tmp(d * d), diff(d * d);
  std::vector<double> y(params.y0);

  for (long long m = 1; m <= steps; ++m) {
    x_times[m] = grid.time(m);

    rng.fill_normal(db);
    rng.fill_normal(dw);
    for (double& v : db) v *= sqrt_h;
    for (double& v : dw) v *= sqrt_h;
    for (int i = 0; i < d; ++i) {
      double acc = orth_weight * dw[i];
      for (int j = 0; j < d; ++j) acc += db[i * d + j] * params.rho[j];
      dz[i] = acc;
    }

    const SymMatrix root = matrix_sqrt_psd(x_left);
    root.to_full(root_full);
    x_left.to_full(x_left_full);

    // X drift: (b + M X + X M') h, using the symmetric part M X + (M X)'.
    SymMatrix x_next(d);
    mat_mul(d, params.mean_reversion.data(), x_left_full.data(), tmp.data());
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        const double drift = params.affine_level(i, j) + tmp[i * d + j] + tmp[j * d + i];
        x_next.set(i, j, x_left(i, j) + drift * h);
      }
    }
    // Diffusion: sqrt(X) dB Sigma + Sigma dB' sqrt(X).
    mat_mul(d, root_full.data(), db.data(), tmp.data());
    mat_mul(d, tmp.data(), sigma_full.data(), diff.data());
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        x_next.set(i, j, x_next(i, j) + diff[i * d + j] + diff[j * d + i]);
      }
    }

    auto projection = psd_project(x_next);
    if (projection.clipped_mass > 0.0) {
      ++clip_count;
      const double reference = std::max(std::abs(x_next.trace()), 1e-300);
      const double fraction = projection.clipped_mass / reference;
      max_clip_fraction = std::max(max_clip_fraction, fraction);
      require(fraction <= 0.10, errc::degenerate_step,
              "PSD projection clipped more than 10% of the trace in one step; "
              "the grid is too coarse");
    }
    SymMatrix x_proj = std::move(projection.projected);

    if (params.lambda_x11 > 0.0) {
      const long long n_jumps = rng.poisson(params.lambda_x11 * h);
      for (long long jj = 0; jj < n_jumps; ++jj) {
        const double mark = rng.exponential(params.theta);
        x_proj.set(0, 0, x_proj(0, 0) + mark);
        x_jumps.push_back({grid.time(m), 0, mark});
      }
    }

    // Y step with X frozen at the left endpoint.
    for (int i = 0; i < d; ++i) {
      double dy = (-0.5 * x_left(i, i) - jump_compensator[i]) * h;
      for (int j = 0; j < d; ++j) dy += root_full[i * d + j] * dz[j];
      y[i] += dy;
    }
    for (int i = 0; i < d; ++i) {
      if (params.lambda_y[i] <= 0.0) continue;
      const long long n_jumps = rng.poisson(params.lambda_y[i] * h);
      for (long long jj = 0; jj < n_jumps; ++jj) {
        const double mark = params.jump_mu[i] + params.jump_sigma[i] * rng.normal();
        y[i] += mark;
        y_jumps.push_back({grid.time(m), i, mark});
      }
    }

    std::copy(y.begin(), y.end(),
              y_values.begin() + static_cast<std::size_t>(m) * d);
    std::copy(x_proj.packed().begin(), x_proj.packed().end(),
              x_values.begin() + static_cast<std::size_t>(m) * packed);
    x_left = std::move(x_proj);
  }

  return SimOutput{
      SampledPath(grid, d, std::move(y_values)),
      SymMatrixPath(std::move(x_times), d, std::move(x_values)),
      std::move(y_jumps),
      std::move(x_jumps),
      clip_count,
      max_clip_fraction,
  };
}

SimOutput strip_jumps(const SimOutput& output) {
  const auto& grid = output.y_path.grid();
  const int d = output.y_path.dim();
  const long long count = grid.count();
  const int packed = output.x_path.packed_size();

  std::vector<double> y_values(output.y_path.values().begin(),
                               output.y_path.values().end());
  std::vector<double> x_values(output.x_path.packed_values().begin(),
                               output.x_path.packed_values().end());

  // A mark recorded at time t_m enters the stored values from index m on.
  auto first_index_at_or_after = [&](double t) {
    const long long idx = static_cast<long long>(
        std::ceil(t * static_cast<double>(grid.samples_per_unit()) - 1e-9));
    return std::clamp<long long>(idx, 0, count - 1);
  };

  for (const auto& jump : output.y_jumps) {
    for (long long m = first_index_at_or_after(jump.time); m < count; ++m) {
      y_values[static_cast<std::size_t>(m) * d + jump.component] -= jump.mark;
    }
  }
  const int x11_offset = sym_packed_index(d, 0, 0);
  for (const auto& jump : output.x_jumps) {
    for (long long m = first_index_at_or_after(jump.time); m < count; ++m) {
      x_values[static_cast<std::size_t>(m) * packed + x11_offset] -= jump.mark;
    }
  }

  std::vector<double> x_times(output.x_path.times().begin(),
                              output.x_path.times().end());
  return SimOutput{
      SampledPath(grid, d, std::move(y_values)),
      SymMatrixPath(std::move(x_times), d, std::move(x_values)),
      {},
      {},
      output.psd_clip_count,
      output.max_clip_fraction,
  };
}

}  // namespace covf::sim
