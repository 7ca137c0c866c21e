#include "covf/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "covf/error.hpp"
#include "covf/parallel.hpp"

namespace covf::fourier {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Compensated (Kahan) accumulator; summation order is fixed by the caller.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

FourierCoefficients::FourierCoefficients(int mode_count, double horizon, int dim,
                                         std::vector<std::complex<double>> packed)
    : n_modes_(mode_count), horizon_(horizon), dim_(dim), data_(std::move(packed)) {
  require(n_modes_ >= 0, errc::invalid_params, "mode count must be >= 0");
  require(horizon_ > 0.0, errc::invalid_params, "horizon must be positive");
  require(data_.size() == static_cast<std::size_t>(2 * n_modes_ + 1) *
                              static_cast<std::size_t>(packed_size()),
          errc::invalid_params, "coefficient buffer has wrong size");
}

std::complex<double> FourierCoefficients::coeff(int k, int i, int j) const {
  require(std::abs(k) <= n_modes_, errc::invalid_params, "mode index out of range");
  return data_[static_cast<std::size_t>(k + n_modes_) * packed_size() +
               sym_packed_index(dim_, i, j)];
}

std::span<const std::complex<double>> FourierCoefficients::packed_at(int k) const {
  require(std::abs(k) <= n_modes_, errc::invalid_params, "mode index out of range");
  return std::span<const std::complex<double>>(data_).subspan(
      static_cast<std::size_t>(k + n_modes_) * packed_size(), packed_size());
}

FourierCoefficients fourier_coefficients(const SampledPath& y,
                                         const GFunctionSpec& g,
                                         int mode_count) {
  require(y.dim() == g.dim, errc::invalid_params,
          "path dimension does not match g-function");
  const long long steps = y.grid().steps();
  require(y.count() >= 2, errc::invalid_params, "need at least 2 observations");
  require(mode_count >= 0, errc::invalid_params, "mode count must be >= 0");
  require(mode_count <= steps, errc::mode_count_too_large,
          "mode count N exceeds the number of increments");

  const long long n = y.grid().samples_per_unit();
  const double horizon = y.grid().horizon();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const int d = y.dim();
  const int packed = d * (d + 1) / 2;

  // g applied to normalized increments, evaluated once and shared by modes.
  std::vector<double> g_values(static_cast<std::size_t>(steps) * packed);
  {
    std::vector<double> x(d);
    for (long long m = 1; m <= steps; ++m) {
      for (int i = 0; i < d; ++i) x[i] = sqrt_n * y.increment(m, i);
      const SymMatrix gm = eval_g(g, x);
      std::copy(gm.packed().begin(), gm.packed().end(),
                g_values.begin() + static_cast<std::size_t>(m - 1) * packed);
    }
  }

  const int total = 2 * mode_count + 1;
  std::vector<std::complex<double>> coeffs(
      static_cast<std::size_t>(total) * packed);

  // t_{m-1} = (m-1)/n, so the phase advances by the fixed rotation
  // exp(-i 2pi k / (n T)) per increment. The rotation is re-anchored to an
  // exactly computed phase every block to stop recurrence drift over the
  // ~1e5-term sums.
  const double grid_span = static_cast<double>(n) * horizon;
  constexpr long long anchor_block = 512;

  par::parallel_for(0, mode_count + 1, [&](long long k) {
    std::vector<Kahan> acc_re(packed), acc_im(packed);
    if (k == 0) {
      for (long long m = 1; m <= steps; ++m) {
        const double* gm = &g_values[static_cast<std::size_t>(m - 1) * packed];
        for (int e = 0; e < packed; ++e) acc_re[e].add(gm[e]);
      }
    } else {
      const std::complex<double> rotation =
          std::polar(1.0, -two_pi * static_cast<double>(k) / grid_span);
      std::complex<double> w(1.0, 0.0);
      for (long long m = 1; m <= steps; ++m) {
        if ((m - 1) % anchor_block == 0) {
          const double revolutions =
              std::fmod(static_cast<double>(k) * static_cast<double>(m - 1),
                        grid_span) /
              grid_span;
          w = std::polar(1.0, -two_pi * revolutions);
        }
        const double* gm = &g_values[static_cast<std::size_t>(m - 1) * packed];
        for (int e = 0; e < packed; ++e) {
          acc_re[e].add(w.real() * gm[e]);
          acc_im[e].add(w.imag() * gm[e]);
        }
        w *= rotation;
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int e = 0; e < packed; ++e) {
      const std::complex<double> value(acc_re[e].sum * inv_n,
                                       acc_im[e].sum * inv_n);
      coeffs[static_cast<std::size_t>(mode_count + k) * packed + e] = value;
      coeffs[static_cast<std::size_t>(mode_count - k) * packed + e] =
          std::conj(value);
    }
  });

  return FourierCoefficients(mode_count, horizon, d, std::move(coeffs));
}

double fejer_kernel(double x, int mode_count) {
  require(mode_count >= 1, errc::invalid_params, "Fejer kernel requires N >= 1");
  const double n = static_cast<double>(mode_count);
  const double reduced = std::remainder(x, two_pi);
  if (std::abs(reduced) < 1e-6) {
    // F_N(x) = N (1 - (N^2-1) x^2 / 12 + O(N^4 x^4)) near the removable
    // singularity; at this threshold the truncation is below 1e-12 relative.
    return n * (1.0 - (n * n - 1.0) * reduced * reduced / 12.0);
  }
  const double ratio = std::sin(0.5 * n * reduced) / std::sin(0.5 * reduced);
  return ratio * ratio / n;
}

SymMatrixPath fejer_reconstruct(const FourierCoefficients& coeffs,
                                std::span<const double> eval_times) {
  const double horizon = coeffs.horizon();
  require(!eval_times.empty(), errc::empty_path, "no evaluation times");
  for (double t : eval_times) {
    require(t >= -1e-12 && t <= horizon * (1.0 + 1e-12), errc::invalid_params,
            "evaluation time outside [0, T]");
  }
  const int n_modes = coeffs.mode_count();
  const int packed = coeffs.packed_size();
  const std::size_t count = eval_times.size();
  std::vector<double> values(count * packed);

  par::parallel_for(0, static_cast<long long>(count), [&](long long idx) {
    const double t = eval_times[static_cast<std::size_t>(idx)];
    std::vector<std::complex<double>> sum(packed, {0.0, 0.0});
    for (int k = -n_modes; k <= n_modes; ++k) {
      const double weight =
          1.0 - std::abs(k) / static_cast<double>(std::max(n_modes, 1));
      if (weight <= 0.0) continue;
      const std::complex<double> phase =
          std::polar(weight, two_pi * k * t / horizon);
      const auto ck = coeffs.packed_at(k);
      for (int e = 0; e < packed; ++e) sum[e] += phase * ck[e];
    }
    for (int e = 0; e < packed; ++e) {
      const double re = sum[e].real() / horizon;
      const double im = sum[e].imag() / horizon;
      require(std::abs(im) <= 1e-9 * std::abs(re) + 1e-12,
              errc::imaginary_residue,
              "Fejer sum has a non-negligible imaginary part");
      values[static_cast<std::size_t>(idx) * packed + e] = re;
    }
  });

  return SymMatrixPath(std::vector<double>(eval_times.begin(), eval_times.end()),
                       coeffs.dim(), std::move(values));
}

std::vector<double> fejer_eval_times(double horizon, int mode_count) {
  require(mode_count >= 1, errc::invalid_params, "mode count must be >= 1");
  std::vector<double> times(2 * mode_count + 1);
  for (int j = 0; j <= 2 * mode_count; ++j) {
    times[j] = horizon * static_cast<double>(j) /
               static_cast<double>(2 * mode_count);
  }
  return times;
}

SpotEstimate estimate_spot_covariance(const SampledPath& y,
                                      const GFunctionSpec& g, int mode_count,
                                      ClampPolicy policy, double eps) {
  require(g.has_inverse(), errc::unsupported,
          "spot estimation requires a g-function with an invertible moment map");
  require(eps > 0.0, errc::invalid_params, "clamp epsilon must be positive");

  const auto coeffs = fourier_coefficients(y, g, mode_count);
  const auto times = fejer_eval_times(y.grid().horizon(), mode_count);
  SymMatrixPath rho_path = fejer_reconstruct(coeffs, times);

  const int d = rho_path.dim();
  const int packed = rho_path.packed_size();
  std::vector<double> x_values(rho_path.size() * packed);
  std::vector<long long> clamped_per_time(rho_path.size(), 0);
  long long clamp_count = 0;

  for (std::size_t p = 0; p < rho_path.size(); ++p) {
    SymMatrix v = rho_path.value(p);
    if (policy == ClampPolicy::clamp_to_eps) {
      for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
          if (v(i, j) <= 0.0) {
            v.set(i, j, eps);
            ++clamp_count;
            ++clamped_per_time[p];
          }
        }
      }
    }
    const SymMatrix x = rho_g_inverse(g, v);
    std::copy(x.packed().begin(), x.packed().end(),
              x_values.begin() + p * packed);
  }

  std::vector<double> x_times(rho_path.times().begin(), rho_path.times().end());
  return SpotEstimate{std::move(rho_path),
                      SymMatrixPath(std::move(x_times), d, std::move(x_values)),
                      clamp_count, std::move(clamped_per_time)};
}

int select_mode_count(long long n, double gamma, double rate_constant,
                      double horizon) {
  require(gamma > 1.0, errc::invalid_rate,
          "the rate condition requires gamma > 1");
  require(rate_constant > 0.0, errc::invalid_params, "K must be positive");
  require(n >= 1, errc::invalid_params, "n must be >= 1");
  const double raw =
      std::pow(static_cast<double>(n) / rate_constant, 1.0 / gamma);
  const long long cap = TimeGrid(n, horizon).steps();
  const long long rounded = std::llround(raw);
  return static_cast<int>(std::clamp<long long>(rounded, 1, cap));
}

}  // namespace covf::fourier
