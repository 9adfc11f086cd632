#ifndef PADE_UNIVERSAL_H
#define PADE_UNIVERSAL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PuStatus {
  PU_STATUS_OK = 0,
  /**
   * Malformed input: bad sizes, non-finite values, tolerances, scenario
   * JSON, overlapping sets.
   */
  PU_STATUS_INVALID_INPUT = 1,
  /**
   * The Hankel determinant vanishes, so `[f; p/q]` does not exist.
   */
  PU_STATUS_PADE_NOT_EXIST = 2,
  /**
   * Pole proximity, degenerate denominators and other numerical failures.
   */
  PU_STATUS_NUMERICAL = 3,
  PU_STATUS_FIT_FAILED = 4,
  PU_STATUS_INDEX_EXHAUSTED = 5,
  PU_STATUS_PERTURBATION_FAILED = 6,
  /**
   * The build ran to the end but its certificate did not pass. The record
   * is still returned.
   */
  PU_STATUS_CERTIFICATE_NOT_PASSED = 7,
  PU_STATUS_NULL_POINTER = 8,
  /**
   * The caller's buffer is too short; the needed length was written.
   */
  PU_STATUS_BUFFER_TOO_SMALL = 9,
  PU_STATUS_PANIC = 10,
} PuStatus;

/**
 * Normalized rational function `A / B`, `B(center) = 1`.
 */
typedef struct PuRational PuRational;

/**
 * Truncated formal power series.
 */
typedef struct PuSeries PuSeries;

/**
 * Mirrors the library's tolerance triple. Pass NULL wherever a
 * `const PuTolerances *` is accepted to get the defaults.
 */
typedef struct PuTolerances {
  double zero;
  double det;
  double residual;
} PuTolerances;

typedef struct PuComplex {
  double re;
  double im;
} PuComplex;

typedef struct PuHankel {
  struct PuComplex value;
  /**
   * Absolute threshold `|value|` was compared against.
   */
  double threshold;
  bool nonvanishing;
} PuHankel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct PuTolerances pu_tolerances_default(void);

/**
 * Message of the last failure on this thread, or NULL. The pointer stays
 * valid until the next `pu_*` call on the same thread.
 */
const char *pu_last_error_message(void);

/**
 * Static, NUL-terminated crate version.
 */
const char *pu_version(void);

/**
 * Series `sum coeffs[k] (z - center)^k` with `len` known coefficients.
 *
 * # Safety
 * `coeffs` must point to `len` readable values (it may be NULL when `len`
 * is 0) and `out` must be writable.
 */
enum PuStatus pu_series_new(struct PuComplex center,
                            const struct PuComplex *coeffs,
                            size_t len,
                            struct PuSeries **out_series);

/**
 * # Safety
 * `series` must come from `pu_series_new` and not be freed twice. NULL is a
 * no-op.
 */
void pu_series_free(struct PuSeries *series);

/**
 * Hankel determinant `D_{p,q}` with its existence verdict.
 *
 * # Safety
 * Pointers must be valid; `tol` may be NULL.
 */
enum PuStatus pu_hankel(const struct PuSeries *series,
                        size_t p,
                        size_t q,
                        const struct PuTolerances *tol,
                        struct PuHankel *out_report);

/**
 * Padé approximant `[f; p/q]`. Fails with `PadeNotExist` when the Hankel
 * determinant is below threshold.
 *
 * # Safety
 * Pointers must be valid; `tol` may be NULL.
 */
enum PuStatus pu_pade(const struct PuSeries *series,
                      size_t p,
                      size_t q,
                      const struct PuTolerances *tol,
                      struct PuRational **out_rational);

/**
 * # Safety
 * `rational` must come from `pu_pade` and not be freed twice. NULL is a
 * no-op.
 */
void pu_rational_free(struct PuRational *rational);

/**
 * Stated degrees and expansion center.
 *
 * # Safety
 * Pointers must be valid.
 */
enum PuStatus pu_rational_shape(const struct PuRational *rational,
                                size_t *out_p,
                                size_t *out_q,
                                struct PuComplex *out_center);

/**
 * Copies the numerator coefficients (about the center) into `buf`. The
 * needed length is always written to `out_len`; call with `cap = 0` to ask.
 *
 * # Safety
 * `buf` must hold `cap` writable values.
 */
enum PuStatus pu_rational_numerator(const struct PuRational *rational,
                                    struct PuComplex *buf,
                                    size_t cap,
                                    size_t *out_len);

/**
 * Denominator counterpart of [`pu_rational_numerator`].
 *
 * # Safety
 * `buf` must hold `cap` writable values.
 */
enum PuStatus pu_rational_denominator(const struct PuRational *rational,
                                      struct PuComplex *buf,
                                      size_t cap,
                                      size_t *out_len);

/**
 * `R(z)`; fails with `Numerical` next to a pole.
 *
 * # Safety
 * Pointers must be valid; `tol` may be NULL.
 */
enum PuStatus pu_rational_eval(const struct PuRational *rational,
                               struct PuComplex z,
                               const struct PuTolerances *tol,
                               struct PuComplex *out_value);

/**
 * `R^{(order)}(z)`, order at most 10.
 *
 * # Safety
 * Pointers must be valid; `tol` may be NULL.
 */
enum PuStatus pu_rational_derivative(const struct PuRational *rational,
                                     size_t order,
                                     struct PuComplex z,
                                     const struct PuTolerances *tol,
                                     struct PuComplex *out_value);

/**
 * Largest `|a_k - b_k|`, `k <= p + q`, between the series and the Taylor
 * coefficients of `R` at the series' center.
 *
 * # Safety
 * Pointers must be valid; `tol` may be NULL.
 */
enum PuStatus pu_order_residual(const struct PuSeries *series,
                                const struct PuRational *rational,
                                const struct PuTolerances *tol,
                                double *out_residual);

/**
 * Runs a universal build scenario (the JSON accepted by the `build`
 * command) and returns the run record as JSON in `out_record`.
 *
 * On `Ok` and `CertificateNotPassed` the record is set and must be released
 * with [`pu_string_free`]. Builder failures (`FitFailed`, `IndexExhausted`,
 * ...) also return the record, carrying the diagnostic under `"error"`;
 * input errors leave `*out_record` NULL.
 *
 * # Safety
 * `scenario_json` must be a NUL-terminated string.
 */
enum PuStatus pu_build(const char *scenario_json, size_t spot_checks, char **out_record);

/**
 * Releases a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void pu_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADE_UNIVERSAL_H */
