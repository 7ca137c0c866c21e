#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace covf {

// Deterministic random stream. The engine is std::mt19937_64 (bit-exact
// across platforms by the standard); the variate transforms below are our
// own so that sampled values, not just raw engine words, are reproducible
// everywhere. Parallel consumers derive independent streams from a master
// seed via substream(), one splitmix64 mixing round per index.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);
  static Rng substream(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(mix(master_seed, index));
  }

  // Uniform on (0,1), 53-bit resolution, never exactly 0 or 1.
  double uniform();

  // Standard normal via Box-Muller; one value per call, the paired value is
  // discarded so consumption per call is fixed.
  double normal();

  // Fills out with standard normals consuming ceil(size/2) Box-Muller pairs.
  void fill_normal(std::span<double> out);

  // Knuth multiplication method; our means are O(1e-3) per step so the
  // expected cost is one uniform per call.
  long long poisson(double mean);

  double exponential(double mean);

 private:
  std::mt19937_64 eng_;
};

}  // namespace covf
