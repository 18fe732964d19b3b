/* C interface to the mean-field fBm simulation engine.
 *
 * All functions return mf_status unless the value is total (mf_fbm_cov).
 * Handles are opaque; every *_new has a matching *_free. Error details for
 * the calling thread are available via mf_last_error(). The status values
 * match the CLI exit-code contract.
 */
#ifndef MEANFIELD_H
#define MEANFIELD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MEANFIELD_API __declspec(dllexport)
#else
#define MEANFIELD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mf_status {
  MF_OK = 0,
  MF_CONDITION_FAIL = 1,
  MF_INDETERMINATE = 2,
  MF_RUNTIME_BLOWUP = 3,
  MF_CONFIG_ERROR = 4,
  MF_INVALID_ARGUMENT = 5,
  MF_IO_ERROR = 6
} mf_status;

/* Message for the most recent failure on this thread; empty string if none. */
MEANFIELD_API const char* mf_last_error(void);

/* ---- fractional Brownian motion ------------------------------------- */

/* (|t|^{2h} + |s|^{2h} - |t-s|^{2h}) / 2; NaN on invalid h. */
MEANFIELD_API double mf_fbm_cov(double t, double s, double hurst);

/* h(2h-1)|u|^{2h-2}; fails for u = 0. */
MEANFIELD_API mf_status mf_fractional_kernel(double u, double hurst, double* out);

/* Increment autocovariance at integer lag for step dt. */
MEANFIELD_API mf_status mf_fgn_autocov(long lag, double hurst, double dt, double* out);

/* Exact-covariance fractional Gaussian noise; fills out_values[0..n-1].
 * Deterministic in (n, hurst, dt, seed). */
MEANFIELD_API mf_status mf_fgn_generate(size_t n, double hurst, double dt,
                                        uint64_t seed, double* out_values);

/* Cumulative fBm path on the uniform grid; fills out_values[0..n]. */
MEANFIELD_API mf_status mf_fbm_path(size_t n_increments, double hurst, double dt,
                                    uint64_t seed, double* out_values);

/* ---- contraction constants and conditions --------------------------- */

typedef struct mf_constants {
  double k, m, delta, ctilde2, hurst;
  double beta1;
  double c_delta_h;  /* valid iff beta2_defined */
  double beta2;      /* valid iff beta2_defined */
  int beta2_defined; /* 0 when hurst <= 3/4 */
} mf_constants;

MEANFIELD_API mf_status mf_beta_constants(double k, double m, double delta,
                                          double ctilde2, double hurst,
                                          mf_constants* out);

typedef struct mf_condition_report {
  double cond1_lhs;
  double cond1p_lhs; /* valid iff cond1p_verdict != -1 */
  double cond2_lhs;
  int cond1_holds;
  int cond1p_verdict; /* 1 holds, 0 fails, -1 indeterminate */
  int cond2_holds;
} mf_condition_report;

MEANFIELD_API mf_status mf_check_conditions(const mf_constants* c,
                                            mf_condition_report* out);

/* K = 2 max{c1^2/4 + c1^2, c2^2/4 + c2^2, c3/2}. */
MEANFIELD_API mf_status mf_example1_k(double c1, double c2, double c3, double* out);

/* K1 = (8/nu) g2^2 g1^2, K2 = g2^2; the family constants are M = 1,
 * delta = nu/2. */
MEANFIELD_API mf_status mf_example2_constants(double g1_weighted_norm,
                                              double g2_sup_norm, double nu,
                                              double* out_k1, double* out_k2);

/* ---- empirical measures --------------------------------------------- */

/* Exact 1-D W2 (sorted coupling); a and b need not have equal counts. */
MEANFIELD_API mf_status mf_wasserstein2_1d(const double* a, size_t na, const double* b,
                                           size_t nb, double* out);

/* Exact d-dimensional W2 by optimal assignment; row-major n x dim inputs,
 * n <= 64. */
MEANFIELD_API mf_status mf_wasserstein2_exact(const double* a, const double* b,
                                              size_t n, size_t dim, double* out);

/* Paired-sample upper bound sqrt(mean ||a_i - b_i||^2). */
MEANFIELD_API mf_status mf_wasserstein2_coupling_bound(const double* a, const double* b,
                                                       size_t n, size_t dim,
                                                       double* out);

/* ---- config-driven commands (what the CLI uses) ---------------------- */

typedef struct mf_config mf_config;
typedef struct mf_result mf_result;

MEANFIELD_API mf_config* mf_config_new(void);
MEANFIELD_API void mf_config_free(mf_config* cfg);
MEANFIELD_API mf_status mf_config_load(mf_config* cfg, const char* path);
/* key is "section.key"; unknown keys are rejected. */
MEANFIELD_API mf_status mf_config_set(mf_config* cfg, const char* key,
                                      const char* value);

/* command is one of "fbm", "check", "simulate", "diagnose". On success the
 * result handle carries the run summary; its status is the exit-code class. */
MEANFIELD_API mf_status mf_run_command(const mf_config* cfg, const char* command,
                                       mf_result** out);
MEANFIELD_API mf_status mf_result_status(const mf_result* res);
MEANFIELD_API const char* mf_result_json(const mf_result* res);
MEANFIELD_API size_t mf_result_file_count(const mf_result* res);
MEANFIELD_API const char* mf_result_file(const mf_result* res, size_t index);
MEANFIELD_API void mf_result_free(mf_result* res);

#ifdef __cplusplus
}
#endif

#endif /* MEANFIELD_H */
