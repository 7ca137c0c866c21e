#pragma once

#include <string>
#include <vector>

#include "covf/paths.hpp"
#include "covf/simulate.hpp"

namespace covf::io {

// Shortest decimal representation that round-trips the double.
std::string format_double(double value);

// Observations CSV: header "time,y1,...,yd", UTF-8, LF, decimal floats.
// Validates equidistant times t_m = m/n within 1e-9 relative spacing
// tolerance and infers (n, T).
SampledPath parse_observations_csv(const std::string& file_path);
void write_observations_csv(const std::string& file_path, const SampledPath& y);

// Matrix-path CSV: header "time,x11,x12,...,xdd" in upper-triangle column
// order; an optional trailing "clamped" column carries per-row counts.
void write_matrix_path_csv(const std::string& file_path, const SymMatrixPath& path,
                           const std::vector<long long>* clamped_per_row = nullptr);
SymMatrixPath parse_matrix_path_csv(const std::string& file_path);

// Jump log CSV: header "time,process,component,mark" where process is
// "y" or "x11".
void write_jumps_csv(const std::string& file_path,
                     const std::vector<sim::JumpEvent>& y_jumps,
                     const std::vector<sim::JumpEvent>& x_jumps);

}  // namespace covf::io
