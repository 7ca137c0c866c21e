#pragma once

namespace covf {

// E|N(0,1)|^r = 2^(r/2) Gamma((r+1)/2) / sqrt(pi), r > -1.
double gaussian_abs_moment(double r);

// Gauss hypergeometric 2F1(a,b;c;x) by direct power series. Terminating
// (polynomial) cases are evaluated for any x; otherwise |x| <= 1 - 1e-8 is
// required so the series converges geometrically on our use domain.
double hyp2f1(double a, double b, double c, double x);

// E|U|^r |V|^s for a unit-variance Gaussian pair with correlation corr:
//   (1/pi) 2^((r+s)/2) Gamma((r+1)/2) Gamma((s+1)/2)
//     * 2F1(-r/2, -s/2; 1/2; corr^2).
double bivariate_abs_moment(double r, double s, double corr);

}  // namespace covf
