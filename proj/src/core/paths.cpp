#include "covf/paths.hpp"

#include <cmath>

#include "covf/error.hpp"

namespace covf {

SampledPath::SampledPath(TimeGrid grid, int dim, std::vector<double> values)
    : grid_(grid), dim_(dim), values_(std::move(values)) {
  require(dim_ >= 1, errc::invalid_params, "path dimension must be >= 1");
  require(values_.size() ==
              static_cast<std::size_t>(grid_.count()) * static_cast<std::size_t>(dim_),
          errc::invalid_params, "path length does not match its grid");
  for (double v : values_) {
    require(std::isfinite(v), errc::non_finite, "path contains a non-finite value");
  }
}

SymMatrixPath::SymMatrixPath(std::vector<double> times, int dim,
                             std::vector<double> packed_values)
    : times_(std::move(times)), dim_(dim), values_(std::move(packed_values)) {
  require(dim_ >= 1, errc::invalid_params, "matrix path dimension must be >= 1");
  require(!times_.empty(), errc::empty_path, "matrix path has no points");
  require(values_.size() == times_.size() * static_cast<std::size_t>(packed_size()),
          errc::invalid_params, "matrix path value count does not match times");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    require(times_[i] > times_[i - 1], errc::invalid_params,
            "matrix path times must be strictly increasing");
  }
}

SymMatrix SymMatrixPath::value(std::size_t idx) const {
  return SymMatrix::from_packed(dim_, packed_at(idx));
}

std::span<const double> SymMatrixPath::packed_at(std::size_t idx) const {
  return std::span<const double>(values_).subspan(idx * packed_size(), packed_size());
}

std::vector<double> SymMatrixPath::entry_series(int i, int j) const {
  std::vector<double> out(size());
  const int offset = sym_packed_index(dim_, i, j);
  const int stride = packed_size();
  for (std::size_t p = 0; p < size(); ++p) out[p] = values_[p * stride + offset];
  return out;
}

}  // namespace covf
