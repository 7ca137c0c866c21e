#pragma once

#include <span>
#include <vector>

#include "covf/paths.hpp"

namespace covf::baseline {

// Block-averaged realized covariance on the coarse grid t_j = j T / N:
// value_j = (N/T) * sum over the block of dY dY'. Block-constant path; the
// stored time of block j is its right endpoint.
struct LocalEstimate {
  SymMatrixPath values;
  long long block_size;  // increments per regular block
};

// When N does not divide the increment count the last block absorbs the
// remainder (the N/T scaling is kept verbatim for every block).
LocalEstimate local_spot_estimator(const SampledPath& y, int blocks);

// Block index (0-based) whose window [t_{j-1}, t_j] contains t.
std::size_t local_block_index(const LocalEstimate& estimate, double t);

// Plain (non-positive-part) James-Stein shrinkage towards the
// cross-sectional mean: mean + (1 - (M-2) noise_var / sum (v - mean)^2)
// * (v - mean). The factor may be negative unless positive_part is set.
std::vector<double> james_stein_shrink(std::span<const double> spot,
                                       double noise_var,
                                       bool positive_part = false);

}  // namespace covf::baseline
