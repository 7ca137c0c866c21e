#pragma once

#include <stdexcept>
#include <string>

namespace covf {

// Error taxonomy. Every failure is either a validation error (bad inputs,
// detectable before any numerics run) or a numerical error (data-driven
// breakdown during a computation). The CLI maps these to exit codes 2 and 3.
enum class errc {
  ok = 0,

  // validation
  invalid_params,
  invalid_rate,
  mode_count_too_large,
  non_symmetric,
  not_psd,
  too_few_points,
  block_too_small,
  not_equidistant,
  non_finite,
  empty_file,
  unsupported,
  grid_mismatch,
  empty_path,
  bad_config,

  // numerical
  degenerate_step,
  out_of_domain,
  imaginary_residue,
  no_convergence,
  solver_failure,
  negative_diagonal,
  degenerate_alpha,
};

bool is_validation(errc code);
const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const { return code_; }
  bool validation() const { return is_validation(code_); }

 private:
  errc code_;
};

[[noreturn]] void fail(errc code, const std::string& message);

inline void require(bool cond, errc code, const std::string& message) {
  if (!cond) fail(code, message);
}

}  // namespace covf
