#ifndef SSX_H
#define SSX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SsxStatus {
  SSX_STATUS_OK = 0,
  SSX_STATUS_NULL_POINTER = 1,
  SSX_STATUS_INVALID_UTF8 = 2,
  SSX_STATUS_PARSE_ERROR = 3,
  SSX_STATUS_INVALID_ARGUMENT = 4,
  SSX_STATUS_INSUFFICIENT_ORDER = 5,
  // The approximant is not real (negative base, tower or branch).
  SSX_STATUS_COMPLEX = 6,
  // Any other method failure; see the last error message.
  SSX_STATUS_METHOD_FAILURE = 7,
  SSX_STATUS_BUFFER_TOO_SMALL = 8,
  SSX_STATUS_PANIC = 9,
} SsxStatus;

// Opaque series handle.
typedef struct SsxSeries SsxSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a series literal, `{"prefactor": {"A": .., "alpha": ..}, "coeffs": [..]}`.
// Values given as strings (`"p/q"`) keep the series exact.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SsxStatus ssx_series_from_json(const char *json, struct SsxSeries **out);

// # Safety
// `series` must come from [`ssx_series_from_json`] and not be freed twice. Null is ignored.
void ssx_series_free(struct SsxSeries *series);

// Truncation order of the series, or 0 for a null handle.
//
// # Safety
// `series` must be null or a live handle.
size_t ssx_series_order(const struct SsxSeries *series);

// True when the series holds exact rationals.
//
// # Safety
// `series` must be null or a live handle.
bool ssx_series_is_exact(const struct SsxSeries *series);

// Runs the method named by `method_tag` (`family:kNpM:mode`, e.g.
// `factor:k4:constrained`, `corrected-root:k2p2`).
//
// `beta` is the target exponent as text (`"0.5"` or `"1/2"`), or null for
// exponent families and free-mode factor approximants. Up to `capacity`
// values are written to `values`; `*count` receives the number of values
// produced even when the buffer is too small. `exponent` may be null; it
// receives the large-x exponent or NaN when unknown.
//
// # Safety
// Pointers must be valid; `values` must hold `capacity` doubles.
enum SsxStatus ssx_extrapolate(const struct SsxSeries *series,
                               const char *method_tag,
                               const char *beta,
                               double *values,
                               size_t capacity,
                               size_t *count,
                               double *exponent);

// Message of the last failure on this thread, or null. The caller owns the
// string and releases it with [`ssx_string_free`].
char *ssx_last_error_message(void);

// # Safety
// `s` must come from this library. Null is ignored.
void ssx_string_free(char *s);

// Library version, static storage.
const char *ssx_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SSX_H */
