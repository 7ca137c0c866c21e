#pragma once

#include <span>
#include <vector>

#include "covf/grid.hpp"
#include "covf/symmat.hpp"

namespace covf {

// Discrete observation of a d-dimensional process on a TimeGrid; values are
// stored row-major (point index, then component).
class SampledPath {
 public:
  SampledPath(TimeGrid grid, int dim, std::vector<double> values);

  const TimeGrid& grid() const { return grid_; }
  int dim() const { return dim_; }
  long long count() const { return grid_.count(); }

  double value(long long m, int i) const {
    return values_[static_cast<std::size_t>(m) * dim_ + i];
  }
  double increment(long long m, int i) const {  // m = 1..steps
    return value(m, i) - value(m - 1, i);
  }

  std::span<const double> values() const { return values_; }

 private:
  TimeGrid grid_;
  int dim_;
  std::vector<double> values_;
};

// Time-indexed sequence of symmetric matrices in packed storage.
class SymMatrixPath {
 public:
  SymMatrixPath(std::vector<double> times, int dim, std::vector<double> packed_values);

  int dim() const { return dim_; }
  std::size_t size() const { return times_.size(); }
  int packed_size() const { return dim_ * (dim_ + 1) / 2; }

  double time(std::size_t idx) const { return times_[idx]; }
  std::span<const double> times() const { return times_; }

  double entry(std::size_t idx, int i, int j) const {
    return values_[idx * packed_size() + sym_packed_index(dim_, i, j)];
  }
  void set_entry(std::size_t idx, int i, int j, double v) {
    values_[idx * packed_size() + sym_packed_index(dim_, i, j)] = v;
  }

  SymMatrix value(std::size_t idx) const;
  std::span<const double> packed_values() const { return values_; }
  std::span<const double> packed_at(std::size_t idx) const;

  // One entry of the path as a contiguous series (copy).
  std::vector<double> entry_series(int i, int j) const;

 private:
  std::vector<double> times_;
  int dim_;
  std::vector<double> values_;
};

}  // namespace covf
