#ifndef RKLGOF_H
#define RKLGOF_H

/* Generated by cbindgen from rklgof-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes shared with the CLI exit codes.
 */
typedef enum RklgofStatus {
  RKLGOF_STATUS_OK = 0,
  /*
   Bad arguments, malformed data, scheme violations.
   */
  RKLGOF_STATUS_INVALID_INPUT = 2,
  /*
   Numerical failure (cancellation, non-convergence, failed replicates).
   */
  RKLGOF_STATUS_NUMERIC_ERROR = 3,
} RklgofStatus;

/*
 Statistic selector.
 */
typedef enum RklgofStatistic {
  RKLGOF_STATISTIC_RENYI = 0,
  RKLGOF_STATISTIC_SHANNON = 1,
} RklgofStatistic;

/*
 Opaque censoring-scheme handle.
 */
typedef struct RklgofScheme RklgofScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the most recent failure on this thread, or NULL if none.
 The pointer stays valid until the next failing call on this thread.
 */
const char *rklgof_last_error_message(void);

/*
 Parse a scheme literal like "n=19 m=8 R=0,0,3,0,3,0,0,5".
 Returns NULL on error (see [`rklgof_last_error_message`]).

 # Safety
 `literal` must be a valid NUL-terminated C string.
 */
struct RklgofScheme *rklgof_scheme_parse(const char *literal);

/*
 Build a scheme from raw fields. Returns NULL on error.

 # Safety
 `removals` must point to `m` readable uint32 values.
 */
struct RklgofScheme *rklgof_scheme_new(uint32_t n, uint32_t m, const uint32_t *removals);

/*
 # Safety
 `scheme` must be a pointer from `rklgof_scheme_parse`/`rklgof_scheme_new`
 that has not been freed, or NULL (a no-op).
 */
void rklgof_scheme_free(struct RklgofScheme *scheme);

/*
 Units on test `n`; 0 if `scheme` is NULL.

 # Safety
 `scheme` must be a live scheme handle or NULL.
 */
uint32_t rklgof_scheme_n(const struct RklgofScheme *scheme);

/*
 Observed failures `m`; 0 if `scheme` is NULL.

 # Safety
 `scheme` must be a live scheme handle or NULL.
 */
uint32_t rklgof_scheme_m(const struct RklgofScheme *scheme);

/*
 Compute a test statistic on `len` strictly increasing observations.
 `alpha` is ignored for the Shannon statistic. On success writes the value
 to `out_value` and the fitted exponential scale to `out_theta_hat`
 (either may be NULL to skip).

 # Safety
 `scheme` must be a live handle; `data` must point to `len` readable
 doubles; out-pointers must be NULL or writable.
 */
enum RklgofStatus rklgof_statistic(const struct RklgofScheme *scheme,
                                   const double *data,
                                   size_t len,
                                   enum RklgofStatistic kind,
                                   double alpha,
                                   uint32_t w,
                                   double *out_value,
                                   double *out_theta_hat);

/*
 Simulated critical value at `level` (upper tail) over `reps` replicates.

 # Safety
 `scheme` must be a live handle; `out` must be writable.
 */
enum RklgofStatus rklgof_critical_value(const struct RklgofScheme *scheme,
                                        enum RklgofStatistic kind,
                                        double alpha,
                                        uint32_t w,
                                        double level,
                                        uint64_t reps,
                                        uint64_t seed,
                                        uint32_t workers,
                                        double *out);

/*
 Monte Carlo p-value P(statistic > observed | exponential null).

 # Safety
 `scheme` must be a live handle; `out` must be writable.
 */
enum RklgofStatus rklgof_p_value(const struct RklgofScheme *scheme,
                                 double observed,
                                 enum RklgofStatistic kind,
                                 double alpha,
                                 uint32_t w,
                                 uint64_t reps,
                                 uint64_t seed,
                                 uint32_t workers,
                                 double *out);

/*
 Window from {1, ..., m-1} minimizing the simulated critical value.

 # Safety
 `scheme` must be a live handle; `out_w` must be writable.
 */
enum RklgofStatus rklgof_select_window(const struct RklgofScheme *scheme,
                                       enum RklgofStatistic kind,
                                       double alpha,
                                       double level,
                                       uint64_t reps,
                                       uint64_t seed,
                                       uint32_t workers,
                                       uint32_t *out_w);

/*
 Run the full test pipeline on a data buffer and return the JSON report
 (NULL on error). `w = 0` selects the window automatically. The returned
 string must be freed with [`rklgof_string_free`].

 # Safety
 `scheme` must be a live handle; `data` must point to `len` readable doubles.
 */
char *rklgof_test_report_json(const struct RklgofScheme *scheme,
                              const double *data,
                              size_t len,
                              enum RklgofStatistic kind,
                              double alpha,
                              uint32_t w,
                              double level,
                              uint64_t reps,
                              uint64_t seed,
                              uint32_t workers);

/*
 Free a string returned by this library. NULL is a no-op.

 # Safety
 `s` must be a pointer previously returned by this library and not yet freed.
 */
void rklgof_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RKLGOF_H */
