#include "covf/rng.hpp"

#include <cmath>
#include <numbers>

#include "covf/error.hpp"

namespace covf {

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer applied to seed + golden-ratio-spaced stream index.
  std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  for (;;) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

void Rng::fill_normal(std::span<double> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    out[i++] = radius * std::cos(2.0 * std::numbers::pi * u2);
    if (i < out.size()) {
      out[i++] = radius * std::sin(2.0 * std::numbers::pi * u2);
    }
  }
}

long long Rng::poisson(double mean) {
  require(mean >= 0.0 && std::isfinite(mean), errc::invalid_params,
          "poisson mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  const double threshold = std::exp(-mean);
  long long count = -1;
  double product = 1.0;
  do {
    product *= uniform();
    ++count;
  } while (product > threshold);
  return count;
}

double Rng::exponential(double mean) {
  require(mean > 0.0, errc::invalid_params, "exponential mean must be positive");
  return -mean * std::log(uniform());
}

}  // namespace covf
