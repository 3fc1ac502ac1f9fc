#ifndef LORENZ_RENORM_H
#define LORENZ_RENORM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum LrStatus {
  LR_STATUS_OK = 0,
  LR_STATUS_NULL_POINTER = 1,
  LR_STATUS_INVALID_INPUT = 2,
  LR_STATUS_NOT_SAFE = 3,
  LR_STATUS_RECIP_NOT_WELL_DEFINED = 4,
  LR_STATUS_UNCOMPARABLE = 5,
  LR_STATUS_COMPOSE_NORM_TOO_LARGE = 6,
  LR_STATUS_EVAL_NOT_IN_DOMAIN = 7,
  LR_STATUS_DERIV_RADIUS_TOO_LARGE = 8,
  LR_STATUS_SHIFT_CONSTANT_MISMATCH = 9,
  LR_STATUS_INTERNAL_SHAPE = 10,
  LR_STATUS_BUFFER_TOO_SMALL = 11,
  LR_STATUS_PANIC = 12,
} LrStatus;

/**
 * Certification inputs: degree, domain radii, ball radius, thresholds.
 */
typedef struct LrInput LrInput;

/**
 * A completed contraction run: refined fixed point, `G`, `eps`, `theta`.
 */
typedef struct LrSession LrSession;

/**
 * Closed interval `[lo, hi]`.
 */
typedef struct LrInterval {
  double lo;
  double hi;
} LrInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after a
 * successful call. Valid until the next call on the same thread.
 */
const char *lr_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lr_version(void);

/**
 * Creates inputs with default thresholds; `sf` and `sg` are decimal
 * literals such as `"2.2"`.
 *
 * # Safety
 * `sf` and `sg` must be NUL-terminated strings; `out_input` must be
 * writable.
 */
enum LrStatus lr_input_new(size_t d, const char *sf, const char *sg, struct LrInput **out_input);

/**
 * # Safety
 * `input` must come from [`lr_input_new`].
 */
enum LrStatus lr_input_set_radius(struct LrInput *input, double radius);

/**
 * # Safety
 * `input` must come from [`lr_input_new`].
 */
enum LrStatus lr_input_set_iters(struct LrInput *input, size_t iters);

/**
 * # Safety
 * `input` must come from [`lr_input_new`] or be null; it must not be used
 * afterwards.
 */
void lr_input_free(struct LrInput *input);

/**
 * Refines the fixed point and bounds `eps` and `theta`.
 *
 * # Safety
 * `input` must come from [`lr_input_new`]; `out_session` must be writable.
 */
enum LrStatus lr_run(const struct LrInput *input, struct LrSession **out_session);

/**
 * # Safety
 * `session` must come from [`lr_run`] or be null.
 */
void lr_session_free(struct LrSession *session);

/**
 * # Safety
 * `session` must come from [`lr_run`]; `out_eps` must be writable.
 */
enum LrStatus lr_session_eps(const struct LrSession *session, double *out_eps);

/**
 * # Safety
 * `session` must come from [`lr_run`]; `out_theta` must be writable.
 */
enum LrStatus lr_session_theta(const struct LrSession *session, double *out_theta);

/**
 * Whether `eps < (1 - theta) r` holds and both thresholds are met.
 *
 * # Safety
 * `session` must come from [`lr_run`]; `out_ok` must be writable.
 */
enum LrStatus lr_session_contraction_ok(const struct LrSession *session, bool *out_ok);

/**
 * Bounds the resolvent on an `arcs`-arc covering of the unit circle.
 * With `sample > 0` only that many seeded random arcs are checked.
 * The result is recorded in the session's certificate.
 *
 * # Safety
 * `session` must come from [`lr_run`]; output pointers must be writable.
 */
enum LrStatus lr_session_hyperbolicity(struct LrSession *session,
                                       size_t arcs,
                                       size_t sample,
                                       uint64_t seed,
                                       size_t jobs,
                                       double *out_max_bound,
                                       bool *out_pass);

/**
 * Dimension `n = 2d` of the matrix `G`.
 *
 * # Safety
 * `session` must come from [`lr_run`]; `out_n` must be writable.
 */
enum LrStatus lr_session_gamma_dim(const struct LrSession *session, size_t *out_n);

/**
 * Copies the entries of `G`, row-major, into `buf` of length `len >= n*n`.
 *
 * # Safety
 * `buf` must point to `len` writable intervals.
 */
enum LrStatus lr_session_gamma(const struct LrSession *session, struct LrInterval *buf, size_t len);

/**
 * Writes the certificate text, NUL-terminated, into `buf`. `out_needed`
 * receives the required size including the terminator; pass a null `buf`
 * to query it.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
enum LrStatus lr_session_certificate(const struct LrSession *session,
                                     char *buf,
                                     size_t len,
                                     size_t *out_needed);

/**
 * Enclosure of `a + b`.
 */
enum LrStatus lr_interval_add(struct LrInterval a, struct LrInterval b, struct LrInterval *result);

/**
 * Enclosure of `a - b`.
 */
enum LrStatus lr_interval_sub(struct LrInterval a, struct LrInterval b, struct LrInterval *result);

/**
 * Enclosure of `a * b`.
 */
enum LrStatus lr_interval_mul(struct LrInterval a, struct LrInterval b, struct LrInterval *result);

/**
 * Enclosure of `a / b`; fails when `b` contains zero.
 */
enum LrStatus lr_interval_div(struct LrInterval a, struct LrInterval b, struct LrInterval *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LORENZ_RENORM_H */
