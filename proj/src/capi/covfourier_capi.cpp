#include "covfourier.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "covf/baseline.hpp"
#include "covf/error.hpp"
#include "covf/fourier.hpp"
#include "covf/io.hpp"
#include "covf/mc.hpp"
#include "covf/second_pass.hpp"
#include "covf/simulate.hpp"
#include "covf/special.hpp"

namespace {

thread_local std::string g_error_message;
thread_local std::string g_error_name;

void clear_error() {
  g_error_message.clear();
  g_error_name.clear();
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
int guard(Fn&& body) {
  clear_error();
  try {
    body();
    return COVF_OK;
  } catch (const covf::Error& err) {
    g_error_message = err.what();
    g_error_name = covf::errc_name(err.code());
    return err.validation() ? COVF_ERR_VALIDATION : COVF_ERR_NUMERICAL;
  } catch (const std::exception& err) {
    g_error_message = err.what();
    g_error_name = "Internal";
    return COVF_ERR_NUMERICAL;
  }
}

void require_c(bool cond, const char* message) {
  covf::require(cond, covf::errc::invalid_params, message);
}

covf::SymMatrix sym_from_full(int dim, const double* full) {
  require_c(full != nullptr, "null matrix buffer");
  return covf::SymMatrix::from_full(dim, std::span<const double>(full, dim * dim));
}

void sym_to_full(const covf::SymMatrix& m, double* out) {
  require_c(out != nullptr, "null output buffer");
  m.to_full(std::span<double>(out, m.dim() * m.dim()));
}

covf::fourier::GFunctionSpec gspec_from_c(const covf_gspec* g) {
  require_c(g != nullptr, "null g-spec");
  switch (g->kind) {
    case COVF_G_POWER:
      return covf::fourier::GFunctionSpec::power(g->dim, g->r, g->s);
    case COVF_G_COSINE:
      return covf::fourier::GFunctionSpec::cosine(g->dim);
    case COVF_G_GAUSS:
      return covf::fourier::GFunctionSpec::gauss(g->dim);
    default:
      covf::fail(covf::errc::invalid_params, "unknown g-function kind");
  }
}

covf::sim::BatesParams params_from_c(const covf_bates_params* p) {
  require_c(p != nullptr, "null parameter struct");
  require_c(p->dim >= 1 && p->dim <= COVF_MAX_DIM, "dim must be in 1..8");
  const int d = p->dim;
  covf::sim::BatesParams out;
  out.dim = d;
  // Matrix buffers hold the dense d*d data in their first d*d slots.
  out.y0.assign(p->y0, p->y0 + d);
  out.x0 = sym_from_full(d, p->x0);
  out.mean_reversion.assign(p->mean_reversion, p->mean_reversion + d * d);
  out.alpha = sym_from_full(d, p->alpha);
  out.affine_level = sym_from_full(d, p->affine_level);
  out.rho.assign(p->rho, p->rho + d);
  out.lambda_y.assign(p->lambda_y, p->lambda_y + d);
  out.jump_mu.assign(p->jump_mu, p->jump_mu + d);
  out.jump_sigma.assign(p->jump_sigma, p->jump_sigma + d);
  out.lambda_x11 = p->lambda_x11;
  out.theta = p->theta;
  return out;
}

covf::second_pass::SecondPassConfig config_from_c(
    const covf_second_pass_config* c) {
  covf::second_pass::SecondPassConfig out;
  if (c == nullptr) return out;
  out.m = c->m;
  out.iota = c->iota;
  out.k_tilde = c->k_tilde;
  out.r_diag = c->r_diag;
  out.r_offdiag = c->r_offdiag;
  out.r_cross = c->r_cross;
  out.s_cross = c->s_cross;
  return out;
}

covf::mc::Design constant_design(double x_const, double horizon) {
  covf::mc::Design design;
  design.kind = covf::mc::Design::Kind::constant_x;
  design.x = covf::SymMatrix::diagonal({x_const});
  design.horizon = horizon;
  return design;
}

}  // namespace

struct covf_path {
  covf::SampledPath value;
};
struct covf_matpath {
  covf::SymMatrixPath value;
};
struct covf_sim {
  covf::sim::SimOutput value;
};
struct covf_coeffs {
  covf::fourier::FourierCoefficients value;
};
struct covf_report {
  covf::mc::ExperimentReport value;
};

extern "C" {

const char* covf_last_error_message(void) { return g_error_message.c_str(); }
const char* covf_last_error_name(void) { return g_error_name.c_str(); }

/* ------------------------------------------------------------------ core */

int covf_matrix_sqrt_psd(int dim, const double* full_in, double* full_out) {
  return guard([&] {
    sym_to_full(covf::matrix_sqrt_psd(sym_from_full(dim, full_in)), full_out);
  });
}

int covf_psd_project(int dim, const double* full_in, double* full_out,
                     double* clipped_mass) {
  return guard([&] {
    auto projection = covf::psd_project(sym_from_full(dim, full_in));
    sym_to_full(projection.projected, full_out);
    if (clipped_mass) *clipped_mass = projection.clipped_mass;
  });
}

/* --------------------------------------------------------------- special */

int covf_hyp2f1(double a, double b, double c, double x, double* out) {
  return guard([&] {
    require_c(out != nullptr, "null output");
    *out = covf::hyp2f1(a, b, c, x);
  });
}

int covf_bivariate_abs_moment(double r, double s, double corr, double* out) {
  return guard([&] {
    require_c(out != nullptr, "null output");
    *out = covf::bivariate_abs_moment(r, s, corr);
  });
}

/* --------------------------------------------------------------- g-specs */

int covf_eval_g(const covf_gspec* g, const double* x, double* full_out) {
  return guard([&] {
    const auto spec = gspec_from_c(g);
    require_c(x != nullptr, "null point");
    sym_to_full(covf::fourier::eval_g(spec, std::span<const double>(x, spec.dim)),
                full_out);
  });
}

int covf_rho_g(const covf_gspec* g, const double* x_full, double* full_out) {
  return guard([&] {
    const auto spec = gspec_from_c(g);
    sym_to_full(covf::fourier::rho_g(spec, sym_from_full(spec.dim, x_full)),
                full_out);
  });
}

int covf_rho_g_inverse(const covf_gspec* g, const double* v_full,
                       double* full_out) {
  return guard([&] {
    const auto spec = gspec_from_c(g);
    sym_to_full(
        covf::fourier::rho_g_inverse(spec, sym_from_full(spec.dim, v_full)),
        full_out);
  });
}

/* ----------------------------------------------------------------- paths */

int covf_path_create(long long n, double horizon, int dim,
                     const double* values, covf_path** out) {
  return guard([&] {
    require_c(out != nullptr && values != nullptr, "null argument");
    covf::TimeGrid grid(n, horizon);
    std::vector<double> copy(
        values, values + static_cast<std::size_t>(grid.count()) * dim);
    *out = new covf_path{covf::SampledPath(grid, dim, std::move(copy))};
  });
}

void covf_path_destroy(covf_path* path) { delete path; }

int covf_path_info(const covf_path* path, long long* n, double* horizon,
                   int* dim, long long* count) {
  return guard([&] {
    require_c(path != nullptr, "null path");
    if (n) *n = path->value.grid().samples_per_unit();
    if (horizon) *horizon = path->value.grid().horizon();
    if (dim) *dim = path->value.dim();
    if (count) *count = path->value.count();
  });
}

int covf_path_values(const covf_path* path, double* out) {
  return guard([&] {
    require_c(path != nullptr && out != nullptr, "null argument");
    const auto values = path->value.values();
    std::copy(values.begin(), values.end(), out);
  });
}

int covf_path_read_csv(const char* file, covf_path** out) {
  return guard([&] {
    require_c(file != nullptr && out != nullptr, "null argument");
    *out = new covf_path{covf::io::parse_observations_csv(file)};
  });
}

int covf_path_write_csv(const covf_path* path, const char* file) {
  return guard([&] {
    require_c(path != nullptr && file != nullptr, "null argument");
    covf::io::write_observations_csv(file, path->value);
  });
}

int covf_matpath_create(long long count, int dim, const double* times,
                        const double* packed_values, covf_matpath** out) {
  return guard([&] {
    require_c(out != nullptr && times != nullptr && packed_values != nullptr,
              "null argument");
    require_c(count >= 1, "count must be >= 1");
    const std::size_t packed = static_cast<std::size_t>(dim) * (dim + 1) / 2;
    *out = new covf_matpath{covf::SymMatrixPath(
        std::vector<double>(times, times + count), dim,
        std::vector<double>(packed_values,
                            packed_values + static_cast<std::size_t>(count) * packed))};
  });
}

void covf_matpath_destroy(covf_matpath* path) { delete path; }

int covf_matpath_info(const covf_matpath* path, long long* count, int* dim) {
  return guard([&] {
    require_c(path != nullptr, "null path");
    if (count) *count = static_cast<long long>(path->value.size());
    if (dim) *dim = path->value.dim();
  });
}

int covf_matpath_times(const covf_matpath* path, double* out) {
  return guard([&] {
    require_c(path != nullptr && out != nullptr, "null argument");
    const auto times = path->value.times();
    std::copy(times.begin(), times.end(), out);
  });
}

int covf_matpath_values(const covf_matpath* path, double* out) {
  return guard([&] {
    require_c(path != nullptr && out != nullptr, "null argument");
    const auto values = path->value.packed_values();
    std::copy(values.begin(), values.end(), out);
  });
}

int covf_matpath_read_csv(const char* file, covf_matpath** out) {
  return guard([&] {
    require_c(file != nullptr && out != nullptr, "null argument");
    *out = new covf_matpath{covf::io::parse_matrix_path_csv(file)};
  });
}

int covf_matpath_write_csv(const covf_matpath* path, const char* file) {
  return guard([&] {
    require_c(path != nullptr && file != nullptr, "null argument");
    covf::io::write_matrix_path_csv(file, path->value);
  });
}

int covf_matpath_subsample(const covf_matpath* path, long long m,
                           double horizon, covf_matpath** out) {
  return guard([&] {
    require_c(path != nullptr && out != nullptr, "null argument");
    *out = new covf_matpath{
        covf::second_pass::subsample_to_coarse_grid(path->value, m, horizon)};
  });
}

/* ------------------------------------------------------------- simulator */

int covf_simulate_bates(const covf_bates_params* params, long long n,
                        double horizon, uint64_t seed, covf_sim** out) {
  return guard([&] {
    require_c(out != nullptr, "null output");
    *out = new covf_sim{covf::sim::simulate_bates(
        params_from_c(params), covf::TimeGrid(n, horizon), seed)};
  });
}

int covf_sim_strip_jumps(const covf_sim* sim, covf_sim** out) {
  return guard([&] {
    require_c(sim != nullptr && out != nullptr, "null argument");
    *out = new covf_sim{covf::sim::strip_jumps(sim->value)};
  });
}

void covf_sim_destroy(covf_sim* sim) { delete sim; }

int covf_sim_observations(const covf_sim* sim, covf_path** out) {
  return guard([&] {
    require_c(sim != nullptr && out != nullptr, "null argument");
    *out = new covf_path{sim->value.y_path};
  });
}

int covf_sim_covariance(const covf_sim* sim, covf_matpath** out) {
  return guard([&] {
    require_c(sim != nullptr && out != nullptr, "null argument");
    *out = new covf_matpath{sim->value.x_path};
  });
}

int covf_sim_jump_counts(const covf_sim* sim, long long* y_jumps,
                         long long* x_jumps) {
  return guard([&] {
    require_c(sim != nullptr, "null simulation");
    if (y_jumps) *y_jumps = static_cast<long long>(sim->value.y_jumps.size());
    if (x_jumps) *x_jumps = static_cast<long long>(sim->value.x_jumps.size());
  });
}

int covf_sim_y_jumps(const covf_sim* sim, double* times, int* components,
                     double* marks) {
  return guard([&] {
    require_c(sim != nullptr, "null simulation");
    for (std::size_t i = 0; i < sim->value.y_jumps.size(); ++i) {
      const auto& jump = sim->value.y_jumps[i];
      if (times) times[i] = jump.time;
      if (components) components[i] = jump.component;
      if (marks) marks[i] = jump.mark;
    }
  });
}

int covf_sim_x_jumps(const covf_sim* sim, double* times, double* marks) {
  return guard([&] {
    require_c(sim != nullptr, "null simulation");
    for (std::size_t i = 0; i < sim->value.x_jumps.size(); ++i) {
      const auto& jump = sim->value.x_jumps[i];
      if (times) times[i] = jump.time;
      if (marks) marks[i] = jump.mark;
    }
  });
}

int covf_sim_clip_stats(const covf_sim* sim, long long* clip_count,
                        double* max_clip_fraction) {
  return guard([&] {
    require_c(sim != nullptr, "null simulation");
    if (clip_count) *clip_count = sim->value.psd_clip_count;
    if (max_clip_fraction) *max_clip_fraction = sim->value.max_clip_fraction;
  });
}

int covf_sim_write_csv(const covf_sim* sim, const char* obs_file,
                       const char* cov_file, const char* jumps_file) {
  return guard([&] {
    require_c(sim != nullptr, "null simulation");
    if (obs_file) covf::io::write_observations_csv(obs_file, sim->value.y_path);
    if (cov_file) covf::io::write_matrix_path_csv(cov_file, sim->value.x_path);
    if (jumps_file) {
      covf::io::write_jumps_csv(jumps_file, sim->value.y_jumps,
                                sim->value.x_jumps);
    }
  });
}

/* -------------------------------------------------------- spot estimation */

int covf_select_mode_count(long long n, double gamma, double rate_constant,
                           double horizon, int* out) {
  return guard([&] {
    require_c(out != nullptr, "null output");
    *out = covf::fourier::select_mode_count(n, gamma, rate_constant, horizon);
  });
}

int covf_fejer_kernel(double x, int mode_count, double* out) {
  return guard([&] {
    require_c(out != nullptr, "null output");
    *out = covf::fourier::fejer_kernel(x, mode_count);
  });
}

int covf_fourier_coefficients(const covf_path* y, const covf_gspec* g,
                              int mode_count, covf_coeffs** out) {
  return guard([&] {
    require_c(y != nullptr && out != nullptr, "null argument");
    *out = new covf_coeffs{covf::fourier::fourier_coefficients(
        y->value, gspec_from_c(g), mode_count)};
  });
}

void covf_coeffs_destroy(covf_coeffs* coeffs) { delete coeffs; }

int covf_coeffs_info(const covf_coeffs* coeffs, int* mode_count,
                     double* horizon, int* dim) {
  return guard([&] {
    require_c(coeffs != nullptr, "null coefficients");
    if (mode_count) *mode_count = coeffs->value.mode_count();
    if (horizon) *horizon = coeffs->value.horizon();
    if (dim) *dim = coeffs->value.dim();
  });
}

int covf_coeffs_get(const covf_coeffs* coeffs, int k, double* re, double* im) {
  return guard([&] {
    require_c(coeffs != nullptr && re != nullptr && im != nullptr,
              "null argument");
    const int d = coeffs->value.dim();
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const auto value = coeffs->value.coeff(k, i, j);
        re[i * d + j] = value.real();
        im[i * d + j] = value.imag();
      }
    }
  });
}

int covf_fejer_reconstruct(const covf_coeffs* coeffs, const double* times,
                           long long count, covf_matpath** out) {
  return guard([&] {
    require_c(coeffs != nullptr && times != nullptr && out != nullptr,
              "null argument");
    *out = new covf_matpath{covf::fourier::fejer_reconstruct(
        coeffs->value, std::span<const double>(times, count))};
  });
}

int covf_estimate_spot(const covf_path* y, const covf_gspec* g, int mode_count,
                       int clamp_policy, double eps, covf_matpath** rho_out,
                       covf_matpath** x_out, long long* clamp_count,
                       long long* clamped_per_time) {
  return guard([&] {
    require_c(y != nullptr, "null path");
    require_c(clamp_policy == COVF_CLAMP_ERROR || clamp_policy == COVF_CLAMP_EPS,
              "unknown clamp policy");
    auto estimate = covf::fourier::estimate_spot_covariance(
        y->value, gspec_from_c(g), mode_count,
        clamp_policy == COVF_CLAMP_ERROR
            ? covf::fourier::ClampPolicy::error_on_domain
            : covf::fourier::ClampPolicy::clamp_to_eps,
        eps);
    if (clamp_count) *clamp_count = estimate.clamp_count;
    if (clamped_per_time) {
      std::copy(estimate.clamped_per_time.begin(),
                estimate.clamped_per_time.end(), clamped_per_time);
    }
    if (rho_out) *rho_out = new covf_matpath{std::move(estimate.rho_path)};
    if (x_out) *x_out = new covf_matpath{std::move(estimate.x_path)};
  });
}

/* ---------------------------------------------------------------- baseline */

int covf_local_spot(const covf_path* y, int blocks, covf_matpath** out,
                    long long* block_size) {
  return guard([&] {
    require_c(y != nullptr && out != nullptr, "null argument");
    auto estimate = covf::baseline::local_spot_estimator(y->value, blocks);
    if (block_size) *block_size = estimate.block_size;
    *out = new covf_matpath{std::move(estimate.values)};
  });
}

int covf_james_stein(const double* values, long long count, double noise_var,
                     int positive_part, double* out) {
  return guard([&] {
    require_c(values != nullptr && out != nullptr, "null argument");
    const auto shrunk = covf::baseline::james_stein_shrink(
        std::span<const double>(values, count), noise_var, positive_part != 0);
    std::copy(shrunk.begin(), shrunk.end(), out);
  });
}

/* ------------------------------------------------------------- second pass */

void covf_second_pass_config_default(covf_second_pass_config* out) {
  if (!out) return;
  covf::second_pass::SecondPassConfig defaults;
  out->m = defaults.m;
  out->iota = defaults.iota;
  out->k_tilde = defaults.k_tilde;
  out->r_diag = defaults.r_diag;
  out->r_offdiag = defaults.r_offdiag;
  out->r_cross = defaults.r_cross;
  out->s_cross = defaults.s_cross;
}

int covf_power_variation(const double* values, long long count, double r,
                         double horizon, double* out) {
  return guard([&] {
    require_c(values != nullptr && out != nullptr, "null argument");
    *out = covf::second_pass::power_variation(
        std::span<const double>(values, count), r, horizon);
  });
}

int covf_cross_power_variation(const double* x_values, long long count,
                               const covf_path* y, int component, double r,
                               double s, double horizon, double* out) {
  return guard([&] {
    require_c(x_values != nullptr && y != nullptr && out != nullptr,
              "null argument");
    *out = covf::second_pass::cross_power_variation(
        std::span<const double>(x_values, count), y->value, component, r, s,
        horizon);
  });
}

int covf_pv12_model(const covf_matpath* x_path, double a11, double a12,
                    double a22, double r, double* out) {
  return guard([&] {
    require_c(x_path != nullptr && out != nullptr, "null argument");
    *out = covf::second_pass::pv12_model(x_path->value, a11, a12, a22, r);
  });
}

int covf_pc_model(const covf_matpath* x_path, const double* alpha_full,
                  const double* rho, int component, double r, double s,
                  double* out) {
  return guard([&] {
    require_c(x_path != nullptr && rho != nullptr && out != nullptr,
              "null argument");
    const int d = x_path->value.dim();
    *out = covf::second_pass::pc_model(x_path->value,
                                       sym_from_full(d, alpha_full),
                                       std::span<const double>(rho, d),
                                       component, r, s);
  });
}

int covf_estimate_alpha(const covf_matpath* xhat,
                        const covf_second_pass_config* config, double* a11,
                        double* a12, double* a22, double* fit_residual) {
  return guard([&] {
    require_c(xhat != nullptr, "null path");
    const auto estimate =
        covf::second_pass::estimate_alpha(xhat->value, config_from_c(config));
    if (a11) *a11 = estimate.a11;
    if (a12) *a12 = estimate.a12;
    if (a22) *a22 = estimate.a22;
    if (fit_residual) *fit_residual = estimate.fit_residual;
  });
}

int covf_estimate_rho(const covf_matpath* xhat, const covf_path* y,
                      const double* alpha_full,
                      const covf_second_pass_config* config, double* rho1,
                      double* rho2, double* objective) {
  return guard([&] {
    require_c(xhat != nullptr && y != nullptr, "null argument");
    const int d = xhat->value.dim();
    const auto estimate = covf::second_pass::estimate_rho(
        xhat->value, y->value, sym_from_full(d, alpha_full),
        config_from_c(config));
    if (rho1) *rho1 = estimate.rho[0];
    if (rho2) *rho2 = estimate.rho[1];
    if (objective) *objective = estimate.objective;
  });
}

int covf_covcov(const covf_matpath* xhat, double r, double s,
                int signed_product, double horizon, double* tensor_out) {
  return guard([&] {
    require_c(xhat != nullptr && tensor_out != nullptr, "null argument");
    const auto tensor = covf::second_pass::covcov_estimator(
        xhat->value, r, s, signed_product != 0, horizon);
    std::copy(tensor.begin(), tensor.end(), tensor_out);
  });
}

/* -------------------------------------------------------------- Monte Carlo */

int covf_mc_clt_fourier(double x_const, double horizon, const covf_gspec* g,
                        long long n, int mode_count, long long reps,
                        uint64_t seed, double tolerance, covf_report** out) {
  return guard([&] {
    require_c(out != nullptr, "null output");
    *out = new covf_report{covf::mc::clt_fourier_experiment(
        constant_design(x_const, horizon), gspec_from_c(g), n, mode_count,
        reps, seed, tolerance)};
  });
}

int covf_mc_clt_spot(double x_const, double horizon, const covf_gspec* g,
                     long long n, double gamma, double rate_constant,
                     double t_eval, long long reps, uint64_t seed,
                     double tolerance, covf_report** out) {
  return guard([&] {
    require_c(out != nullptr, "null output");
    *out = new covf_report{covf::mc::clt_spot_experiment(
        constant_design(x_const, horizon), gspec_from_c(g), n, gamma,
        rate_constant, t_eval, reps, seed, tolerance)};
  });
}

int covf_mc_consistency(double x_const, double horizon, const covf_gspec* g,
                        const long long* n_list, int n_count, double gamma,
                        double rate_constant, long long reps, uint64_t seed,
                        double slope_tolerance, covf_report** out) {
  return guard([&] {
    require_c(out != nullptr && n_list != nullptr, "null argument");
    *out = new covf_report{covf::mc::consistency_sweep(
        constant_design(x_const, horizon), gspec_from_c(g),
        std::span<const long long>(n_list, n_count), gamma, rate_constant,
        reps, seed, slope_tolerance)};
  });
}

void covf_report_destroy(covf_report* report) { delete report; }

int covf_report_passed(const covf_report* report, int* passed) {
  return guard([&] {
    require_c(report != nullptr && passed != nullptr, "null argument");
    *passed = report->value.passed ? 1 : 0;
  });
}

int covf_report_metric_count(const covf_report* report, int* count) {
  return guard([&] {
    require_c(report != nullptr && count != nullptr, "null argument");
    *count = static_cast<int>(report->value.metrics.size());
  });
}

int covf_report_metric(const covf_report* report, int index, char* name_buf,
                       size_t name_cap, double* value, double* target,
                       double* ci_lo, double* ci_hi, int* pass) {
  return guard([&] {
    require_c(report != nullptr, "null report");
    require_c(index >= 0 &&
                  index < static_cast<int>(report->value.metrics.size()),
              "metric index out of range");
    const auto& metric = report->value.metrics[index];
    if (name_buf && name_cap > 0) {
      std::strncpy(name_buf, metric.name.c_str(), name_cap - 1);
      name_buf[name_cap - 1] = '\0';
    }
    if (value) *value = metric.value;
    if (target) *target = metric.target;
    if (ci_lo) *ci_lo = metric.ci_lo;
    if (ci_hi) *ci_hi = metric.ci_hi;
    if (pass) *pass = metric.pass ? 1 : 0;
  });
}

int covf_report_write(const covf_report* report, const char* csv_file,
                      const char* text_file) {
  return guard([&] {
    require_c(report != nullptr, "null report");
    if (csv_file) covf::mc::write_report_csv(report->value, csv_file);
    if (text_file) covf::mc::write_report_text(report->value, text_file);
  });
}

int covf_report_summary(const covf_report* report, char* buf, size_t cap) {
  return guard([&] {
    require_c(report != nullptr && buf != nullptr && cap > 0, "null argument");
    const std::string text = covf::mc::report_summary(report->value);
    std::strncpy(buf, text.c_str(), cap - 1);
    buf[cap - 1] = '\0';
  });
}

} /* extern "C" */
