#include "covf/error.hpp"

namespace covf {

bool is_validation(errc code) {
  switch (code) {
    case errc::invalid_params:
    case errc::invalid_rate:
    case errc::mode_count_too_large:
    case errc::non_symmetric:
    case errc::not_psd:
    case errc::too_few_points:
    case errc::block_too_small:
    case errc::not_equidistant:
    case errc::non_finite:
    case errc::empty_file:
    case errc::unsupported:
    case errc::grid_mismatch:
    case errc::empty_path:
    case errc::bad_config:
      return true;
    default:
      return false;
  }
}

const char* errc_name(errc code) {
  switch (code) {
    case errc::ok: return "ok";
    case errc::invalid_params: return "InvalidParams";
    case errc::invalid_rate: return "InvalidRate";
    case errc::mode_count_too_large: return "ModeCountTooLarge";
    case errc::non_symmetric: return "NonSymmetric";
    case errc::not_psd: return "NotPSD";
    case errc::too_few_points: return "TooFewPoints";
    case errc::block_too_small: return "BlockTooSmall";
    case errc::not_equidistant: return "NotEquidistant";
    case errc::non_finite: return "NonFinite";
    case errc::empty_file: return "EmptyFile";
    case errc::unsupported: return "Unsupported";
    case errc::grid_mismatch: return "GridMismatch";
    case errc::empty_path: return "EmptyPath";
    case errc::bad_config: return "BadConfig";
    case errc::degenerate_step: return "DegenerateStep";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::imaginary_residue: return "ImaginaryResidue";
    case errc::no_convergence: return "NoConvergence";
    case errc::solver_failure: return "SolverFailure";
    case errc::negative_diagonal: return "NegativeDiagonal";
    case errc::degenerate_alpha: return "DegenerateAlpha";
  }
  return "unknown";
}

void fail(errc code, const std::string& message) {
  throw Error(code, std::string(errc_name(code)) + ": " + message);
}

}  // namespace covf
