#include "covf/special.hpp"

#include <cmath>
#include <numbers>

#include "covf/error.hpp"

namespace covf {

namespace {

bool is_nonpositive_integer(double v) {
  return v <= 1e-12 && std::abs(v - std::round(v)) < 1e-12;
}

}  // namespace

double gaussian_abs_moment(double r) {
  require(r > -1.0, errc::invalid_params, "absolute moment requires r > -1");
  return std::pow(2.0, 0.5 * r) * std::tgamma(0.5 * (r + 1.0)) /
         std::sqrt(std::numbers::pi);
}

double hyp2f1(double a, double b, double c, double x) {
  require(!is_nonpositive_integer(c), errc::invalid_params,
          "2F1 is undefined for nonpositive integer c");
  const bool terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  if (!terminating) {
    require(std::abs(x) <= 1.0 - 1e-8, errc::invalid_params,
            "2F1 series requires |x| <= 1 - 1e-8");
  }
  if (x == 0.0) return 1.0;

  double term = 1.0;
  double sum = 1.0;
  constexpr long long max_terms = 1000000;
  for (long long k = 0; k < max_terms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x;
    if (term == 0.0) return sum;  // terminating polynomial
    sum += term;
    if (std::abs(term) < 1e-14 * std::abs(sum)) return sum;
  }
  fail(errc::no_convergence, "2F1 series did not converge within 1e6 terms");
}

double bivariate_abs_moment(double r, double s, double corr) {
  require(r >= 0.0 && s >= 0.0, errc::invalid_params,
          "bivariate moment requires r, s >= 0");
  require(std::abs(corr) <= 1.0, errc::invalid_params,
          "correlation must lie in [-1, 1]");
  const double prefactor = std::pow(2.0, 0.5 * (r + s)) *
                           std::tgamma(0.5 * (r + 1.0)) *
                           std::tgamma(0.5 * (s + 1.0)) / std::numbers::pi;
  return prefactor * hyp2f1(-0.5 * r, -0.5 * s, 0.5, corr * corr);
}

}  // namespace covf
