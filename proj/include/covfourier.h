/*
 * covfourier — pathwise covariance estimation for jump-diffusions.
 *
 * C API over the C++ core: opaque handles, status codes, thread-local
 * error strings. Every function returns COVF_OK on success or one of the
 * COVF_ERR_* codes; on failure covf_last_error_message() describes what
 * went wrong. Handles are created by covf_* constructors and must be
 * released with their matching *_destroy.
 *
 * Symmetric matrices cross the boundary as full row-major d*d buffers;
 * matrix paths use packed upper-triangle rows (row-major, i <= j, length
 * d(d+1)/2 per point).
 */
#ifndef COVFOURIER_H
#define COVFOURIER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define COVF_API __declspec(dllexport)
#else
#define COVF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define COVF_OK 0
#define COVF_ERR_VALIDATION 2
#define COVF_ERR_NUMERICAL 3

/* Thread-local description of the last failure in the calling thread. */
COVF_API const char* covf_last_error_message(void);
COVF_API const char* covf_last_error_name(void);

typedef struct covf_path covf_path;       /* sampled d-dim path on t_m = m/n */
typedef struct covf_matpath covf_matpath; /* time-indexed symmetric matrices */
typedef struct covf_sim covf_sim;         /* simulator output */
typedef struct covf_coeffs covf_coeffs;   /* estimated Fourier coefficients */
typedef struct covf_report covf_report;   /* Monte Carlo experiment report */

/* ---------------------------------------------------------------- core */

COVF_API int covf_matrix_sqrt_psd(int dim, const double* full_in,
                                  double* full_out);
COVF_API int covf_psd_project(int dim, const double* full_in, double* full_out,
                              double* clipped_mass);

/* ---------------------------------------------------- special functions */

COVF_API int covf_hyp2f1(double a, double b, double c, double x, double* out);
COVF_API int covf_bivariate_abs_moment(double r, double s, double corr,
                                       double* out);

/* ------------------------------------------------------------- g-specs */

#define COVF_G_POWER 0  /* |x_i|^r |x_j|^s, diagonal |x_i|^(r+s) */
#define COVF_G_COSINE 1 /* cos(x_i + 1_{i!=j} x_j) */
#define COVF_G_GAUSS 2  /* exp(-(x_i + 1_{i!=j} x_j)^2 / 2) */

typedef struct covf_gspec {
  int kind;
  int dim;
  double r;
  double s;
} covf_gspec;

COVF_API int covf_eval_g(const covf_gspec* g, const double* x,
                         double* full_out);
COVF_API int covf_rho_g(const covf_gspec* g, const double* x_full,
                        double* full_out);
COVF_API int covf_rho_g_inverse(const covf_gspec* g, const double* v_full,
                                double* full_out);

/* --------------------------------------------------------------- paths */

COVF_API int covf_path_create(long long n, double horizon, int dim,
                              const double* values, covf_path** out);
COVF_API void covf_path_destroy(covf_path* path);
COVF_API int covf_path_info(const covf_path* path, long long* n,
                            double* horizon, int* dim, long long* count);
COVF_API int covf_path_values(const covf_path* path, double* out);
COVF_API int covf_path_read_csv(const char* file, covf_path** out);
COVF_API int covf_path_write_csv(const covf_path* path, const char* file);

COVF_API int covf_matpath_create(long long count, int dim, const double* times,
                                 const double* packed_values,
                                 covf_matpath** out);
COVF_API void covf_matpath_destroy(covf_matpath* path);
COVF_API int covf_matpath_info(const covf_matpath* path, long long* count,
                               int* dim);
COVF_API int covf_matpath_times(const covf_matpath* path, double* out);
COVF_API int covf_matpath_values(const covf_matpath* path, double* out);
COVF_API int covf_matpath_read_csv(const char* file, covf_matpath** out);
COVF_API int covf_matpath_write_csv(const covf_matpath* path,
                                    const char* file);
/* Nearest-index subsample onto t_p = p * horizon / m, p = 0..m. */
COVF_API int covf_matpath_subsample(const covf_matpath* path, long long m,
                                    double horizon, covf_matpath** out);

/* ----------------------------------------------------------- simulator */

#define COVF_MAX_DIM 8

/* Matrix members carry the dense row-major d*d data in their first d*d
 * slots; trailing slots are ignored. */
typedef struct covf_bates_params {
  int dim;
  double y0[COVF_MAX_DIM];
  double x0[COVF_MAX_DIM * COVF_MAX_DIM];
  double mean_reversion[COVF_MAX_DIM * COVF_MAX_DIM]; /* M */
  double alpha[COVF_MAX_DIM * COVF_MAX_DIM];          /* Sigma^2 */
  double affine_level[COVF_MAX_DIM * COVF_MAX_DIM];   /* b */
  double rho[COVF_MAX_DIM];
  double lambda_y[COVF_MAX_DIM];
  double jump_mu[COVF_MAX_DIM];
  double jump_sigma[COVF_MAX_DIM];
  double lambda_x11;
  double theta; /* mean of the exponential marks on X_11 */
} covf_bates_params;

COVF_API int covf_simulate_bates(const covf_bates_params* params, long long n,
                                 double horizon, uint64_t seed,
                                 covf_sim** out);
COVF_API int covf_sim_strip_jumps(const covf_sim* sim, covf_sim** out);
COVF_API void covf_sim_destroy(covf_sim* sim);
COVF_API int covf_sim_observations(const covf_sim* sim, covf_path** out);
COVF_API int covf_sim_covariance(const covf_sim* sim, covf_matpath** out);
COVF_API int covf_sim_jump_counts(const covf_sim* sim, long long* y_jumps,
                                  long long* x_jumps);
COVF_API int covf_sim_y_jumps(const covf_sim* sim, double* times,
                              int* components, double* marks);
COVF_API int covf_sim_x_jumps(const covf_sim* sim, double* times,
                              double* marks);
COVF_API int covf_sim_clip_stats(const covf_sim* sim, long long* clip_count,
                                 double* max_clip_fraction);
COVF_API int covf_sim_write_csv(const covf_sim* sim, const char* obs_file,
                                const char* cov_file, const char* jumps_file);

/* ----------------------------------------------------- spot estimation */

COVF_API int covf_select_mode_count(long long n, double gamma,
                                    double rate_constant, double horizon,
                                    int* out);
COVF_API int covf_fejer_kernel(double x, int mode_count, double* out);

COVF_API int covf_fourier_coefficients(const covf_path* y,
                                       const covf_gspec* g, int mode_count,
                                       covf_coeffs** out);
COVF_API void covf_coeffs_destroy(covf_coeffs* coeffs);
COVF_API int covf_coeffs_info(const covf_coeffs* coeffs, int* mode_count,
                              double* horizon, int* dim);
/* re/im are full row-major d*d buffers for mode k in [-N, N]. */
COVF_API int covf_coeffs_get(const covf_coeffs* coeffs, int k, double* re,
                             double* im);
COVF_API int covf_fejer_reconstruct(const covf_coeffs* coeffs,
                                    const double* times, long long count,
                                    covf_matpath** out);

#define COVF_CLAMP_ERROR 0
#define COVF_CLAMP_EPS 1

COVF_API int covf_estimate_spot(const covf_path* y, const covf_gspec* g,
                                int mode_count, int clamp_policy, double eps,
                                covf_matpath** rho_out, covf_matpath** x_out,
                                long long* clamp_count,
                                long long* clamped_per_time /* 2N+1, or NULL */);

/* ------------------------------------------------------------ baseline */

COVF_API int covf_local_spot(const covf_path* y, int blocks,
                             covf_matpath** out, long long* block_size);
COVF_API int covf_james_stein(const double* values, long long count,
                              double noise_var, int positive_part,
                              double* out);

/* --------------------------------------------------------- second pass */

typedef struct covf_second_pass_config {
  long long m;     /* coarse sample count; 0 derives round(k_tilde * n^iota) */
  double iota;
  double k_tilde;
  double r_diag;    /* power for jumping diagonal components */
  double r_offdiag; /* power for the remaining components */
  double r_cross;
  double s_cross;
} covf_second_pass_config;

COVF_API void covf_second_pass_config_default(covf_second_pass_config* out);

COVF_API int covf_power_variation(const double* values, long long count,
                                  double r, double horizon, double* out);
COVF_API int covf_cross_power_variation(const double* x_values,
                                        long long count, const covf_path* y,
                                        int component, double r, double s,
                                        double horizon, double* out);
COVF_API int covf_pv12_model(const covf_matpath* x_path, double a11,
                             double a12, double a22, double r, double* out);
COVF_API int covf_pc_model(const covf_matpath* x_path,
                           const double* alpha_full, const double* rho,
                           int component, double r, double s, double* out);
COVF_API int covf_estimate_alpha(const covf_matpath* xhat,
                                 const covf_second_pass_config* config,
                                 double* a11, double* a12, double* a22,
                                 double* fit_residual);
COVF_API int covf_estimate_rho(const covf_matpath* xhat, const covf_path* y,
                               const double* alpha_full,
                               const covf_second_pass_config* config,
                               double* rho1, double* rho2, double* objective);
/* tensor_out is P*P row-major with P = d(d+1)/2. */
COVF_API int covf_covcov(const covf_matpath* xhat, double r, double s,
                         int signed_product, double horizon,
                         double* tensor_out);

/* ---------------------------------------------------------- Monte Carlo */

COVF_API int covf_mc_clt_fourier(double x_const, double horizon,
                                 const covf_gspec* g, long long n,
                                 int mode_count, long long reps, uint64_t seed,
                                 double tolerance, covf_report** out);
COVF_API int covf_mc_clt_spot(double x_const, double horizon,
                              const covf_gspec* g, long long n, double gamma,
                              double rate_constant, double t_eval,
                              long long reps, uint64_t seed, double tolerance,
                              covf_report** out);
COVF_API int covf_mc_consistency(double x_const, double horizon,
                                 const covf_gspec* g, const long long* n_list,
                                 int n_count, double gamma,
                                 double rate_constant, long long reps,
                                 uint64_t seed, double slope_tolerance,
                                 covf_report** out);
COVF_API void covf_report_destroy(covf_report* report);
COVF_API int covf_report_passed(const covf_report* report, int* passed);
COVF_API int covf_report_metric_count(const covf_report* report, int* count);
COVF_API int covf_report_metric(const covf_report* report, int index,
                                char* name_buf, size_t name_cap, double* value,
                                double* target, double* ci_lo, double* ci_hi,
                                int* pass);
COVF_API int covf_report_write(const covf_report* report, const char* csv_file,
                               const char* text_file);
COVF_API int covf_report_summary(const covf_report* report, char* buf,
                                 size_t cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COVFOURIER_H */
