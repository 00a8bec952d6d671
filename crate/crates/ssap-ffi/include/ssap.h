#ifndef SSAP_FFI_H
#define SSAP_FFI_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes for every fallible call.
 */
typedef enum SsapStatus {
  SSAP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SSAP_STATUS_NULL_ARGUMENT = 1,
  /**
   * A distribution parameter was out of range.
   */
  SSAP_STATUS_INVALID_PARAMETER = 2,
  /**
   * The normalization series diverges (nu = 0 requires lambda < 1).
   */
  SSAP_STATUS_DIVERGENT_SERIES = 3,
  /**
   * Robots/stages combination is infeasible.
   */
  SSAP_STATUS_INFEASIBLE = 4,
  /**
   * Query indices fall outside the stored table window.
   */
  SSAP_STATUS_OUT_OF_RANGE = 5,
  /**
   * Sequence length does not match the table.
   */
  SSAP_STATUS_BAD_SEQUENCE_LENGTH = 6,
} SsapStatus;

/**
 * Opaque online-executor handle: a table plus mutable deployment state.
 */
typedef struct SsapExecutor SsapExecutor;

/**
 * Opaque prior-distribution handle.
 */
typedef struct SsapPrior SsapPrior;

/**
 * Opaque threshold-table handle.
 */
typedef struct SsapThresholds SsapThresholds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a NUL-terminated static string.
 */
const char *ssap_version(void);

/**
 * Create a Poisson prior. Writes a handle the caller must release with
 * `ssap_prior_free`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SsapStatus ssap_prior_new_poisson(double lambda, struct SsapPrior **out);

/**
 * Create a Conway-Maxwell-Poisson prior.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SsapStatus ssap_prior_new_cmp(double lambda, double nu, struct SsapPrior **out);

/**
 * Create a continuous uniform prior on [lo, hi].
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SsapStatus ssap_prior_new_uniform(double lo, double hi, struct SsapPrior **out);

/**
 * Create a histogram prior from parallel value/count arrays of length
 * `len`.
 *
 * # Safety
 * `values` and `counts` must point to `len` readable elements; `out` must
 * be null or valid for writes.
 */
enum SsapStatus ssap_prior_new_histogram(const int64_t *values,
                                         const uint64_t *counts,
                                         uintptr_t len,
                                         struct SsapPrior **out);

/**
 * Mean of the prior.
 *
 * # Safety
 * `prior` must be a live handle from this library; `out` must be writable.
 */
enum SsapStatus ssap_prior_mean(const struct SsapPrior *prior, double *out);

/**
 * Release a prior handle. Null is a no-op.
 *
 * # Safety
 * `prior` must be null or a handle from this library, not yet freed.
 */
void ssap_prior_free(struct SsapPrior *prior);

/**
 * Compute the threshold table for `stages` decision points and `robots`
 * deployments.
 *
 * # Safety
 * `prior` must be a live handle from this library; `out` must be null or
 * valid for writes.
 */
enum SsapStatus ssap_thresholds_new(const struct SsapPrior *prior,
                                    uintptr_t stages,
                                    uintptr_t robots,
                                    struct SsapThresholds **out);

/**
 * Number of stages, or 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle from this library.
 */
uintptr_t ssap_thresholds_stages(const struct SsapThresholds *table);

/**
 * Number of deployments, or 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle from this library.
 */
uintptr_t ssap_thresholds_robots(const struct SsapThresholds *table);

/**
 * Threshold a_{i,n}; sentinels map to -INFINITY / +INFINITY.
 *
 * # Safety
 * `table` must be a live handle from this library; `out` must be writable.
 */
enum SsapStatus ssap_thresholds_get(const struct SsapThresholds *table,
                                    uintptr_t n,
                                    uintptr_t i,
                                    double *out);

/**
 * Deploy/hold query with `n_remaining` stages and `r_remaining` robots
 * left. Writes true into `out_deploy` on deploy and the cutoff used into
 * `out_threshold` (may be an infinity).
 *
 * # Safety
 * `table` must be a live handle from this library; out-pointers must be
 * writable.
 */
enum SsapStatus ssap_decide(const struct SsapThresholds *table,
                            uintptr_t n_remaining,
                            uintptr_t r_remaining,
                            double x,
                            bool *out_deploy,
                            double *out_threshold);

/**
 * Run the policy over a full sequence of length `len` (must equal the
 * table's stage count). Writes the 1-based deployment indices into
 * `out_indices`, which must hold `ssap_thresholds_robots(table)` entries,
 * and the summed reward into `out_total`.
 *
 * # Safety
 * `table` must be a live handle from this library, `sequence` must point
 * to `len` readable doubles, `out_indices` to a writable buffer of at
 * least the table's robot count, and `out_total` must be writable.
 */
enum SsapStatus ssap_run_online(const struct SsapThresholds *table,
                                const double *sequence,
                                uintptr_t len,
                                uintptr_t *out_indices,
                                double *out_total);

/**
 * Release a threshold-table handle. Null is a no-op.
 *
 * # Safety
 * `table` must be null or a handle from this library, not yet freed.
 */
void ssap_thresholds_free(struct SsapThresholds *table);

/**
 * Create an online executor bound to a table, starting at stage 1 with
 * all robots aboard.
 *
 * # Safety
 * `table` must be a live handle from this library; `out` must be null or
 * valid for writes.
 */
enum SsapStatus ssap_executor_new(const struct SsapThresholds *table, struct SsapExecutor **out);

/**
 * Feed the next observation. Writes true into `out_deploy` when a robot
 * goes out at this stage.
 *
 * # Safety
 * `exec` must be a live handle from this library with exclusive access;
 * `out_deploy` must be writable.
 */
enum SsapStatus ssap_executor_step(struct SsapExecutor *exec, double x, bool *out_deploy);

/**
 * Robots not yet deployed, or 0 for a null handle.
 *
 * # Safety
 * `exec` must be null or a live handle from this library.
 */
uintptr_t ssap_executor_robots_remaining(const struct SsapExecutor *exec);

/**
 * Sum of rewards collected so far.
 *
 * # Safety
 * `exec` must be null or a live handle from this library.
 */
double ssap_executor_total_reward(const struct SsapExecutor *exec);

/**
 * Release an executor handle. Null is a no-op.
 *
 * # Safety
 * `exec` must be null or a handle from this library, not yet freed.
 */
void ssap_executor_free(struct SsapExecutor *exec);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SSAP_FFI_H */
