#pragma once

#include <cstdint>

namespace covf {

// Equidistant observation grid t_m = m/n on [0, T]. Stored as (n, T) with
// derived index arithmetic; times are never materialized as a float array,
// so t_m carries a single rounding, not n accumulated ones.
class TimeGrid {
 public:
  TimeGrid(long long samples_per_unit, double horizon);

  long long samples_per_unit() const { return n_; }
  double horizon() const { return horizon_; }

  // Number of increments, floor(n*T) with a relative guard against the
  // representation of T landing just below an integer multiple.
  long long steps() const { return steps_; }
  long long count() const { return steps_ + 1; }

  double dt() const { return 1.0 / static_cast<double>(n_); }
  double time(long long m) const {
    return static_cast<double>(m) / static_cast<double>(n_);
  }

 private:
  long long n_;
  double horizon_;
  long long steps_;
};

}  // namespace covf
