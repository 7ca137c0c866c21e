#include "covf/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "covf/error.hpp"

namespace covf::baseline {

LocalEstimate local_spot_estimator(const SampledPath& y, int blocks) {
  const long long increments = y.grid().steps();
  require(blocks >= 1, errc::invalid_params, "block count must be >= 1");
  const long long block_size = increments / blocks;
  require(block_size >= 1, errc::block_too_small,
          "a block would receive no increments");

  const int d = y.dim();
  const int packed = d * (d + 1) / 2;
  const double horizon = y.grid().horizon();
  const double scale = static_cast<double>(blocks) / horizon;

  std::vector<double> times(blocks);
  std::vector<double> values(static_cast<std::size_t>(blocks) * packed, 0.0);

  for (int j = 0; j < blocks; ++j) {
    const long long first = static_cast<long long>(j) * block_size + 1;
    const long long last =
        (j == blocks - 1) ? increments : (static_cast<long long>(j) + 1) * block_size;
    times[j] = horizon * static_cast<double>(j + 1) / static_cast<double>(blocks);
    double* out = &values[static_cast<std::size_t>(j) * packed];
    for (long long m = first; m <= last; ++m) {
      int e = 0;
      for (int i = 0; i < d; ++i) {
        const double di = y.increment(m, i);
        for (int k = i; k < d; ++k, ++e) out[e] += di * y.increment(m, k);
      }
    }
    for (int e = 0; e < packed; ++e) out[e] *= scale;
  }

  return LocalEstimate{SymMatrixPath(std::move(times), d, std::move(values)),
                       block_size};
}

std::size_t local_block_index(const LocalEstimate& estimate, double t) {
  const auto& times = estimate.values.times();
  const auto it = std::lower_bound(times.begin(), times.end(), t - 1e-12);
  const std::size_t idx = static_cast<std::size_t>(it - times.begin());
  return std::min(idx, times.size() - 1);
}

std::vector<double> james_stein_shrink(std::span<const double> spot,
                                       double noise_var, bool positive_part) {
  const std::size_t count = spot.size();
  require(count >= 3, errc::too_few_points,
          "James-Stein shrinkage needs at least 3 points");
  require(noise_var >= 0.0 && std::isfinite(noise_var), errc::invalid_params,
          "noise variance must be finite and nonnegative");

  double mean = 0.0;
  for (double v : spot) mean += v;
  mean /= static_cast<double>(count);

  double sum_sq = 0.0;
  for (double v : spot) sum_sq += (v - mean) * (v - mean);

  std::vector<double> out(count, mean);
  if (sum_sq == 0.0) {
    // all deviations vanish; factor * 0 = 0 regardless of the factor
    return std::vector<double>(spot.begin(), spot.end());
  }
  double factor = 1.0 - (static_cast<double>(count) - 2.0) * noise_var / sum_sq;
  if (positive_part) factor = std::max(factor, 0.0);
  for (std::size_t i = 0; i < count; ++i) out[i] = mean + factor * (spot[i] - mean);
  return out;
}

}  // namespace covf::baseline
