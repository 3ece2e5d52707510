#ifndef SJSLAB_H
#define SJSLAB_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SjStatus {
  SJ_STATUS_OK = 0,
  SJ_STATUS_INVALID_ARGUMENT = 1,
  SJ_STATUS_DOMAIN = 2,
  SJ_STATUS_VALIDATION = 3,
  SJ_STATUS_ACCURACY = 4,
  SJ_STATUS_NEAR_ZERO_OVERLAP = 5,
  SJ_STATUS_DEGENERATE = 6,
  SJ_STATUS_NUMERICAL = 7,
  SJ_STATUS_NULL_POINTER = 8,
  SJ_STATUS_OUT_OF_RANGE = 9,
  SJ_STATUS_PANIC = 10,
} SjStatus;

typedef enum SjOutcome {
  SJ_OUTCOME_CONSISTENT_WITH_SUMMABLE = 0,
  SJ_OUTCOME_DIVERGENCE_INDICATED = 1,
  SJ_OUTCOME_EXACT_ZERO = 2,
} SjOutcome;

/**
 * Opaque series report.
 */
typedef struct SjSeriesReport SjSeriesReport;

/**
 * Opaque spatial spectrum.
 */
typedef struct SjSpectrum SjSpectrum;

/**
 * Per-mode constants at slab half-width `tau`.
 */
typedef struct SjModeConstants {
  double omega;
  double tau;
  double sin_2wt;
  double sinc_2wt;
  double norm_c2;
  double norm_s2;
  double delta;
  double lambda_plus;
} SjModeConstants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sj_last_error_message(void);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SjStatus sj_mode_constants(double omega, double tau, struct SjModeConstants *out);

/**
 * Kernel of the S-J two-point function of one mode at (t, t2).
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SjStatus sj_aj_plus_kernel(const struct SjModeConstants *mc,
                                double t,
                                double t2,
                                double *re,
                                double *im);

/**
 * Kernel of the ground-state two-point function e^{-iω(t-t2)}/(2ω).
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SjStatus sj_ground_state_kernel(double omega, double t, double t2, double *re, double *im);

/**
 * Real kernel of the normal-ordered two-point function.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum SjStatus sj_normord_kernel(const struct SjModeConstants *mc, double t, double t2, double *out);

/**
 * Round sphere S³ of radius `radius`, levels 0..=level_max.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SjStatus sj_spectrum_sphere(double radius,
                                 double mass,
                                 size_t level_max,
                                 struct SjSpectrum **out);

/**
 * Cubic torus T³ of period `period`, shells |n|² ≤ norm2_max.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum SjStatus sj_spectrum_torus(double period,
                                double mass,
                                uint64_t norm2_max,
                                struct SjSpectrum **out);

/**
 * Spectrum from `len` frequencies and multiplicities.
 *
 * # Safety
 * `omegas` and `multiplicities` must point to `len` readable elements.
 */
enum SjStatus sj_spectrum_custom(const double *omegas,
                                 const uint64_t *multiplicities,
                                 size_t len,
                                 double mass,
                                 struct SjSpectrum **out);

/**
 * Number of levels; 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t sj_spectrum_len(const struct SjSpectrum *s);

/**
 * # Safety
 * `s` must be a live handle; outputs null or valid.
 */
enum SjStatus sj_spectrum_level(const struct SjSpectrum *s,
                                size_t index,
                                double *omega,
                                uint64_t *multiplicity);

/**
 * # Safety
 * `s` must be null or a handle from this library, not yet freed.
 */
void sj_spectrum_free(struct SjSpectrum *s);

/**
 * Hilbert–Schmidt series for both branches of the normal-ordered operator.
 * A non-positive `tau_inner` selects τ/2.
 *
 * # Safety
 * `s` must be a live handle; outputs null or valid.
 */
enum SjStatus sj_nec_series(const struct SjSpectrum *s,
                            double tau,
                            double tau_inner,
                            size_t level_max,
                            size_t window,
                            struct SjSeriesReport **out_c,
                            struct SjSeriesReport **out_s);

/**
 * # Safety
 * `s` must be a live handle; `out` null or valid.
 */
enum SjStatus sj_disjoint_ground_state(const struct SjSpectrum *s,
                                       double tau,
                                       size_t level_max,
                                       size_t window,
                                       struct SjSeriesReport **out);

/**
 * # Safety
 * `s` must be a live handle; `out` null or valid.
 */
enum SjStatus sj_disjoint_two_slabs(const struct SjSpectrum *s,
                                    double tau,
                                    double tau_prime,
                                    size_t level_max,
                                    size_t window,
                                    struct SjSeriesReport **out);

/**
 * Number of terms; 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t sj_series_len(const struct SjSeriesReport *r);

/**
 * # Safety
 * `r` must be a live handle; outputs null or valid.
 */
enum SjStatus sj_series_term(const struct SjSeriesReport *r,
                             size_t index,
                             double *term,
                             double *partial_sum);

/**
 * P(L)/P(L/2); NaN when undefined.
 *
 * # Safety
 * `r` must be a live handle; `out` null or valid.
 */
enum SjStatus sj_series_growth_ratio(const struct SjSeriesReport *r, double *out);

/**
 * # Safety
 * `r` must be a live handle; `out` null or valid.
 */
enum SjStatus sj_series_tail_sup(const struct SjSeriesReport *r, double *out);

/**
 * # Safety
 * `r` must be a live handle; `out` null or valid.
 */
enum SjStatus sj_series_outcome(const struct SjSeriesReport *r, enum SjOutcome *out);

/**
 * # Safety
 * `r` must be null or a handle from this library, not yet freed.
 */
void sj_series_free(struct SjSeriesReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SJSLAB_H */
