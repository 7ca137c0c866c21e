#include "covf/gfunction.hpp"

#include <cmath>

#include "covf/error.hpp"
#include "covf/special.hpp"

namespace covf::fourier {

GFunctionSpec GFunctionSpec::power(int dim, double r, double s) {
  require(dim >= 1, errc::invalid_params, "g-function dimension must be >= 1");
  require(r > 0.0 && s >= 0.0, errc::invalid_params,
          "power variation requires r > 0 and s >= 0");
  return {GKind::power_variation, dim, r, s};
}

GFunctionSpec GFunctionSpec::cosine(int dim) {
  require(dim >= 1, errc::invalid_params, "g-function dimension must be >= 1");
  return {GKind::cosine_tt, dim};
}

GFunctionSpec GFunctionSpec::gauss(int dim) {
  require(dim >= 1, errc::invalid_params, "g-function dimension must be >= 1");
  return {GKind::gauss_exp, dim};
}

bool GFunctionSpec::has_moment_map() const {
  if (kind == GKind::power_variation) return s == 0.0;
  return true;
}

bool GFunctionSpec::has_inverse() const {
  return kind == GKind::cosine_tt || kind == GKind::gauss_exp;
}

SymMatrix eval_g(const GFunctionSpec& spec, std::span<const double> x) {
  const int d = spec.dim;
  require(static_cast<int>(x.size()) == d, errc::invalid_params,
          "point dimension does not match g-function");
  SymMatrix out(d);
  switch (spec.kind) {
    case GKind::power_variation:
      for (int i = 0; i < d; ++i) {
        out.set(i, i, std::pow(std::abs(x[i]), spec.r + spec.s));
        for (int j = i + 1; j < d; ++j) {
          out.set(i, j, std::pow(std::abs(x[i]), spec.r) *
                            std::pow(std::abs(x[j]), spec.s));
        }
      }
      break;
    case GKind::cosine_tt:
      for (int i = 0; i < d; ++i) {
        out.set(i, i, std::cos(x[i]));
        for (int j = i + 1; j < d; ++j) out.set(i, j, std::cos(x[i] + x[j]));
      }
      break;
    case GKind::gauss_exp:
      for (int i = 0; i < d; ++i) {
        out.set(i, i, std::exp(-0.5 * x[i] * x[i]));
        for (int j = i + 1; j < d; ++j) {
          const double sum = x[i] + x[j];
          out.set(i, j, std::exp(-0.5 * sum * sum));
        }
      }
      break;
  }
  return out;
}

SymMatrix rho_g(const GFunctionSpec& spec, const SymMatrix& x) {
  const int d = spec.dim;
  require(x.dim() == d, errc::invalid_params, "matrix dimension mismatch");
  SymMatrix out(d);
  switch (spec.kind) {
    case GKind::power_variation: {
      require(spec.s == 0.0, errc::unsupported,
              "rho_g for power variation is only available for s = 0");
      const double moment = gaussian_abs_moment(spec.r);
      for (int i = 0; i < d; ++i) {
        const double marginal = moment * std::pow(x(i, i), 0.5 * spec.r);
        for (int j = i; j < d; ++j) out.set(i, j, marginal);
      }
      break;
    }
    case GKind::cosine_tt:
      for (int i = 0; i < d; ++i) {
        out.set(i, i, std::exp(-0.5 * x(i, i)));
        for (int j = i + 1; j < d; ++j) {
          out.set(i, j, std::exp(-0.5 * (x(i, i) + 2.0 * x(i, j) + x(j, j))));
        }
      }
      break;
    case GKind::gauss_exp:
      for (int i = 0; i < d; ++i) {
        out.set(i, i, 1.0 / std::sqrt(x(i, i) + 1.0));
        for (int j = i + 1; j < d; ++j) {
          out.set(i, j,
                  1.0 / std::sqrt(x(i, i) + 2.0 * x(i, j) + x(j, j) + 1.0));
        }
      }
      break;
  }
  return out;
}

SymMatrix rho_gg(const GFunctionSpec& spec, const SymMatrix& x) {
  const int d = spec.dim;
  require(x.dim() == d, errc::invalid_params, "matrix dimension mismatch");
  SymMatrix out(d);
  switch (spec.kind) {
    case GKind::power_variation: {
      require(spec.s == 0.0, errc::unsupported,
              "rho_gg for power variation is only available for s = 0");
      const double moment = gaussian_abs_moment(2.0 * spec.r);
      for (int i = 0; i < d; ++i) {
        const double marginal = moment * std::pow(x(i, i), spec.r);
        for (int j = i; j < d; ++j) out.set(i, j, marginal);
      }
      break;
    }
    case GKind::cosine_tt:
      // E cos^2(v'U) = (1 + exp(-2 var(v'U))) / 2
      for (int i = 0; i < d; ++i) {
        out.set(i, i, 0.5 * (1.0 + std::exp(-2.0 * x(i, i))));
        for (int j = i + 1; j < d; ++j) {
          const double var = x(i, i) + 2.0 * x(i, j) + x(j, j);
          out.set(i, j, 0.5 * (1.0 + std::exp(-2.0 * var)));
        }
      }
      break;
    case GKind::gauss_exp:
      // E exp(-(v'U)^2) = 1/sqrt(1 + 2 var(v'U))
      for (int i = 0; i < d; ++i) {
        out.set(i, i, 1.0 / std::sqrt(1.0 + 2.0 * x(i, i)));
        for (int j = i + 1; j < d; ++j) {
          const double var = x(i, i) + 2.0 * x(i, j) + x(j, j);
          out.set(i, j, 1.0 / std::sqrt(1.0 + 2.0 * var));
        }
      }
      break;
  }
  return out;
}

namespace {

void check_inverse_domain(double v) {
  require(v > 0.0 && v <= 1.0 + 1e-10, errc::out_of_domain,
          "moment-map inverse requires entries in (0, 1]");
}

}  // namespace

SymMatrix rho_g_inverse(const GFunctionSpec& spec, const SymMatrix& v) {
  const int d = spec.dim;
  require(v.dim() == d, errc::invalid_params, "matrix dimension mismatch");
  require(spec.has_inverse(), errc::unsupported,
          "no closed moment-map inverse for this g-function");
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) check_inverse_domain(v(i, j));

  SymMatrix x(d);
  if (spec.kind == GKind::cosine_tt) {
    for (int i = 0; i < d; ++i) x.set(i, i, -2.0 * std::log(v(i, i)));
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        x.set(i, j,
              0.5 * (-2.0 * std::log(v(i, j)) - x(i, i) - x(j, j)));
      }
    }
  } else {  // gauss_exp
    for (int i = 0; i < d; ++i) {
      const double vi = v(i, i);
      x.set(i, i, 1.0 / (vi * vi) - 1.0);
    }
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double vij = v(i, j);
        x.set(i, j, 0.5 * (1.0 / (vij * vij) - 1.0 - x(i, i) - x(j, j)));
      }
    }
  }
  return x;
}

double rho_g_inverse_diagonal(const GFunctionSpec& spec, double v) {
  switch (spec.kind) {
    case GKind::cosine_tt:
      check_inverse_domain(v);
      return -2.0 * std::log(v);
    case GKind::gauss_exp:
      check_inverse_domain(v);
      return 1.0 / (v * v) - 1.0;
    case GKind::power_variation: {
      require(spec.s == 0.0, errc::unsupported,
              "diagonal inverse for power variation requires s = 0");
      require(v >= 0.0, errc::out_of_domain,
              "power-variation moment values are nonnegative");
      return std::pow(v / gaussian_abs_moment(spec.r), 2.0 / spec.r);
    }
  }
  fail(errc::unsupported, "unknown g-function kind");
}

}  // namespace covf::fourier
