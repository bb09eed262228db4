/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef RTEA_H
#define RTEA_H

#include <stdbool.h>
#include <stddef.h>

// Status codes returned by every function.
typedef enum RteaStatus {
  RTEA_STATUS_OK = 0,
  RTEA_STATUS_NULL_POINTER = 1,
  RTEA_STATUS_INVALID_PARAMETER = 2,
  RTEA_STATUS_INVALID_INPUT = 3,
  RTEA_STATUS_UNSUPPORTED = 4,
  RTEA_STATUS_INVALID_PERIOD = 5,
  RTEA_STATUS_NUMERICAL = 6,
  RTEA_STATUS_IO = 7,
  RTEA_STATUS_BUFFER_TOO_SMALL = 8,
  RTEA_STATUS_PANIC = 9,
} RteaStatus;

typedef enum RteaPenalty {
  RTEA_PENALTY_ABS = 0,
  RTEA_PENALTY_LOG = 1,
  RTEA_PENALTY_RAT = 2,
  RTEA_PENALTY_ATAN = 3,
} RteaPenalty;

// Which array [`rtea_result_copy`] reads.
typedef enum RteaField {
  RTEA_FIELD_X1 = 0,
  RTEA_FIELD_X2 = 1,
  RTEA_FIELD_RESIDUAL = 2,
  // Cost before the first iteration, then after each one.
  RTEA_FIELD_COST_HISTORY = 3,
} RteaField;

// Opaque extraction settings.
typedef struct RteaConfig RteaConfig;

// Opaque extraction output.
typedef struct RteaResult RteaResult;

// Parameters a configuration resolves to for a given signal.
typedef struct RteaParams {
  double sigma;
  double lam0;
  double lam1;
  double lam2;
  double a0;
  // `1 / (k0 lam0)`; `a0` stays below it.
  double convexity_bound;
  size_t k0;
} RteaParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library from the same thread.
const char *rtea_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *rtea_version(void);

// Creates a configuration from the two fault periods in samples with group
// shape `n1` x `m` (both in 1..=4). Defaults: eta 0.5, a0 fraction 0.5,
// atan coupling penalty, MAD noise estimate, 200 iterations, tol 1e-8.
//
// # Safety
// `out` must be valid for a pointer write.
enum RteaStatus rtea_config_from_periods(double t1,
                                         double t2,
                                         size_t n1,
                                         size_t m,
                                         struct RteaConfig **out);

// Sets the coupling share `eta` in (0, 1), the non-convexity as a fraction
// of the convexity bound in [0, 1), and the coupling penalty family.
//
// # Safety
// `cfg` must come from [`rtea_config_from_periods`] and not be freed.
enum RteaStatus rtea_config_set_tuning(struct RteaConfig *cfg,
                                       double eta,
                                       double a0_fraction,
                                       enum RteaPenalty penalty);

// Fixes the noise level. A value of 0 restores the MAD estimate.
//
// # Safety
// `cfg` must be a live configuration handle.
enum RteaStatus rtea_config_set_sigma(struct RteaConfig *cfg, double sigma);

// Sets the iteration cap and the relative cost-change tolerance.
//
// # Safety
// `cfg` must be a live configuration handle.
enum RteaStatus rtea_config_set_stop(struct RteaConfig *cfg, size_t max_iter, double tol);

// Resolves the regularization parameters the configuration would use on
// `y`.
//
// # Safety
// `y` must point to `len` doubles; `out` must be writable.
enum RteaStatus rtea_config_params(const struct RteaConfig *cfg,
                                   const double *y,
                                   size_t len,
                                   struct RteaParams *out);

// Releases a configuration. Null is ignored.
//
// # Safety
// `cfg` must be null or a handle not yet freed.
void rtea_config_free(struct RteaConfig *cfg);

// Splits `y` into two periodic transient components.
//
// # Safety
// `y` must point to `len` doubles; `out` must be writable.
enum RteaStatus rtea_solve_signal(const struct RteaConfig *cfg,
                                  const double *y,
                                  size_t len,
                                  struct RteaResult **out);

// Releases a result. Null is ignored.
//
// # Safety
// `res` must be null or a handle not yet freed.
void rtea_result_free(struct RteaResult *res);

// Signal length of a result.
//
// # Safety
// `res` must be a live result handle.
enum RteaStatus rtea_result_len(const struct RteaResult *res, size_t *out);

// Iterations run, whether the tolerance was met, and the final cost.
//
// # Safety
// `res` must be a live result handle; the outputs must be writable.
enum RteaStatus rtea_result_stats(const struct RteaResult *res,
                                  size_t *iterations,
                                  bool *converged,
                                  double *final_cost);

// Copies one output array into `buf`, whose capacity is `cap` doubles.
// `written` receives the array length; if `cap` is smaller, nothing is
// copied and the status is `RTEA_STATUS_BUFFER_TOO_SMALL`.
//
// # Safety
// `buf` must be writable for `cap` doubles; `written` must be writable.
enum RteaStatus rtea_result_copy(const struct RteaResult *res,
                                 enum RteaField field,
                                 double *buf,
                                 size_t cap,
                                 size_t *written);

// Robust noise level `median(|y - median(y)|) / 0.6745`.
//
// # Safety
// `y` must point to `len` doubles; `out` must be writable.
enum RteaStatus rtea_estimate_sigma(const double *y, size_t len, double *out);

// Reports whether `a0 < 1 / (k0 lam0)` and the bound itself.
//
// # Safety
// `valid` and `bound` must be writable.
enum RteaStatus rtea_check_convexity(size_t k0, double lam0, double a0, bool *valid, double *bound);

// Single-component periodic group denoising with convex abs penalty.
// `lam <= 0` selects `beta(n1, m)` times the MAD noise estimate. Writes
// `len` doubles to `out`.
//
// # Safety
// `y` must point to `len` doubles and `out` must be writable for `len`.
enum RteaStatus rtea_pogs_denoise(const double *y,
                                  size_t len,
                                  double period,
                                  size_t n1,
                                  size_t m,
                                  double lam,
                                  size_t max_iter,
                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RTEA_H */
