#include "covf/grid.hpp"

#include <cmath>

#include "covf/error.hpp"

namespace covf {

TimeGrid::TimeGrid(long long samples_per_unit, double horizon)
    : n_(samples_per_unit), horizon_(horizon) {
  require(n_ > 0, errc::invalid_params, "grid requires n > 0");
  require(horizon_ > 0.0 && std::isfinite(horizon_), errc::invalid_params,
          "grid requires a finite horizon T > 0");
  const double product = static_cast<double>(n_) * horizon_;
  steps_ = static_cast<long long>(std::floor(product * (1.0 + 1e-12) + 1e-9));
  require(steps_ >= 1, errc::invalid_params, "grid has no increments");
}

}  // namespace covf
