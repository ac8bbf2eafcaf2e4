/* C interface to the conifold library. Generated by cbindgen; do not edit. */

#ifndef CONIFOLD_H
#define CONIFOLD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum ConifoldStatus {
  // The call succeeded.
  CONIFOLD_STATUS_OK = 0,
  // The polynomial fails the interiority hypothesis; see
  // `conifold_last_error_message` for the certificate direction.
  CONIFOLD_STATUS_HYPOTHESIS_VIOLATED = 1,
  // The input could not be parsed or exceeds a resource guard.
  CONIFOLD_STATUS_INVALID_INPUT = 2,
  // The computation failed (iteration budget, indefinite Hessian, ...).
  CONIFOLD_STATUS_NUMERICAL_FAILURE = 3,
  // A pointer argument was null, a buffer too short, or an option
  // out of range.
  CONIFOLD_STATUS_INVALID_ARGUMENT = 4,
} ConifoldStatus;

// Opaque handle to an exact Laurent polynomial with positive coefficients.
typedef struct ConifoldPolynomial ConifoldPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Borrowed pointer to the message for the most recent failure on this
// thread; empty string after a success. Valid until the next call into
// the library from the same thread. Never null. Do not free.
const char *conifold_last_error_message(void);

// Library version as a static string. Do not free.
const char *conifold_version(void);

// Parse `text` (same grammar as the CLI, e.g. `"x1 + x2 + x1^-1*x2^-1"`)
// into a new handle written to `*out`.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum ConifoldStatus conifold_parse(const char *text,
                                   struct ConifoldPolynomial **out);

// Build the standard potential of a builtin fan (`"P1"`..`"P4"`,
// `"P1xP1"`, `"P1xP2"`, `"dP7"`, `"dP6"`, `"dP5"`/`"hexagon"`; case
// insensitive) into a new handle written to `*out`.
//
// # Safety
// `name` must be a nul-terminated string and `out` a valid pointer.
enum ConifoldStatus conifold_from_fan_name(const char *name,
                                           struct ConifoldPolynomial **out);

// Destroy a handle. Null is a no-op.
//
// # Safety
// `handle` must come from this library and not be freed twice.
void conifold_free(struct ConifoldPolynomial *handle);

// Number of variables, or 0 for a null handle.
//
// # Safety
// `handle` must be null or a live pointer from this library.
size_t conifold_dimension(const struct ConifoldPolynomial *handle);

// Number of monomials, or 0 for a null handle.
//
// # Safety
// `handle` must be null or a live pointer from this library.
size_t conifold_term_count(const struct ConifoldPolynomial *handle);

// Decide the interiority hypothesis. `*origin_interior` and
// `*polytope_dim` are always written on `Ok`; the status is `Ok` even
// when the hypothesis fails — the outcome is data here, not an error.
//
// # Safety
// All pointers must be valid; `handle` must come from this library.
enum ConifoldStatus conifold_validate(const struct ConifoldPolynomial *handle,
                                      bool *origin_interior,
                                      size_t *polytope_dim);

// Locate the conifold point. `point_out` must hold `point_len` doubles
// with `point_len >= conifold_dimension(handle)`; the log coordinates of
// the minimizer are written there and the critical value to `*value_out`.
//
// # Safety
// All pointers must be valid and `point_out` must have the stated length.
enum ConifoldStatus conifold_critical_point(const struct ConifoldPolynomial *handle,
                                            double tol,
                                            size_t max_iter,
                                            double *point_out,
                                            size_t point_len,
                                            double *value_out);

// Eigenvalues of the Hessian at the conifold point, ascending.
// `spectrum_out` must hold `spectrum_len >= conifold_dimension(handle)`
// doubles.
//
// # Safety
// All pointers must be valid and `spectrum_out` must have the stated
// length.
enum ConifoldStatus conifold_hessian_spectrum(const struct ConifoldPolynomial *handle,
                                              double tol,
                                              size_t max_iter,
                                              double *spectrum_out,
                                              size_t spectrum_len);

// Estimate the exponential growth rate of the constant-term moments from
// the exact sequence `M_0..M_kmax` (consecutive-period ratio when
// available, k-th root otherwise). Needs at least ten nonzero moments.
//
// # Safety
// All pointers must be valid; `handle` must come from this library.
enum ConifoldStatus conifold_moment_growth(const struct ConifoldPolynomial *handle,
                                           size_t kmax,
                                           double *estimate_out);

// Full analysis as a JSON document (the same bytes the CLI prints).
// `kmax = 0` skips the moment section. On `Ok` or `HypothesisViolated`,
// `*json_out` receives a string to release with `conifold_string_free`.
//
// # Safety
// All pointers must be valid; `handle` must come from this library.
enum ConifoldStatus conifold_analyze_json(const struct ConifoldPolynomial *handle,
                                          double tol,
                                          size_t max_iter,
                                          size_t kmax,
                                          char **json_out);

// Release a string allocated by this library. Null is a no-op.
//
// # Safety
// `text` must come from this library and not be freed twice.
void conifold_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONIFOLD_H */
