/* C interface to the pellforms exact-arithmetic library. */

#ifndef PELLFORMS_H
#define PELLFORMS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum PfStatus {
  // Success.
  PF_STATUS_OK = 0,
  // Malformed textual input.
  PF_STATUS_PARSE_ERROR = 1,
  // A domain precondition failed (see `pf_last_error`).
  PF_STATUS_DOMAIN_ERROR = 2,
  // A required pointer argument was NULL.
  PF_STATUS_NULL_POINTER = 3,
  // Input bytes were not valid UTF-8.
  PF_STATUS_UTF8_ERROR = 4,
  // The point is not primitive, so no data is attached.
  PF_STATUS_NOT_PRIMITIVE = 5,
  // Internal invariant violation; see `pf_last_error`.
  PF_STATUS_INTERNAL_ERROR = 6,
} PfStatus;

// Opaque handle to a Pell conic of fundamental discriminant.
typedef struct PfConic PfConic;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Most recent error message on this thread. Valid until the next failing
// call; do not free.
const char *pf_last_error(void);

// Library version as a static string; do not free.
const char *pf_version(void);

// Free a string returned by this library. NULL is ignored.
void pf_string_free(char *s);

// Create a conic handle for a fundamental discriminant given in decimal.
enum PfStatus pf_conic_new(const char *delta, struct PfConic **out);

// Destroy a conic handle. NULL is ignored.
void pf_conic_free(struct PfConic *conic);

// The discriminant of the conic, in decimal.
enum PfStatus pf_conic_delta(const struct PfConic *conic, char **out);

// Exact membership test for a point in the `(x ; y)` syntax.
enum PfStatus pf_conic_contains(const struct PfConic *conic, const char *point, bool *out);

// Group law: add two on-conic points, returning the sum in point syntax.
enum PfStatus pf_conic_add(const struct PfConic *conic,
                           const char *first,
                           const char *second,
                           char **out);

// Group law: subtract the second point from the first.
enum PfStatus pf_conic_sub(const struct PfConic *conic,
                           const char *first,
                           const char *second,
                           char **out);

// Group law: invert an on-conic point.
enum PfStatus pf_conic_neg(const struct PfConic *conic, const char *point, char **out);

// Analyze a point: JSON with `A`, `beta`, `quotient`, `numerator`,
// `form`, `ideal`. Returns `NotPrimitive` when the point carries no data.
enum PfStatus pf_point_analyze(const struct PfConic *conic, const char *point, char **out);

// Map a primitive point to its torsor point `(T ; U)` and attached class.
// JSON: `{"t": "...", "u": "...", "class": "F2[A,beta]"}`.
enum PfStatus pf_point_phi(const struct PfConic *conic, const char *point, char **out);

// Pull an integral torsor point of `F2[A,beta]` back to the conic.
enum PfStatus pf_point_phi_inv(const struct PfConic *conic,
                               const char *class_,
                               const char *point,
                               char **out);

// Split a kernel point into rational and integral parts.
// JSON: `{"rational": "(x ; y)", "integral": "(x ; y)"}`, or `null` when
// the attached class is nonprincipal.
enum PfStatus pf_point_decompose(const struct PfConic *conic, const char *point, char **out);

// The cocycle of a primitive point: JSON with the torsor point used and
// the values at the identity and at conjugation.
enum PfStatus pf_point_cocycle(const struct PfConic *conic, const char *point, char **out);

// Compose two classes given as `F[A,beta]` or `F2[A,beta]` (both of the
// same kind) over the decimal discriminant; returns the composed class in
// the same syntax.
enum PfStatus pf_form_compose(const char *delta, const char *first, const char *second, char **out);

// Square an `F[A,beta]` class into the square-coefficient subgroup,
// returning `F2[A,beta3]`.
enum PfStatus pf_form_square(const char *delta, const char *class_, char **out);

// Reduce a form `(a,b,c)`; JSON with the reduced form and the unimodular
// certificate matrix.
enum PfStatus pf_form_reduce(const char *form, char **out);

// Order of the narrow class group (or of its squares subgroup).
enum PfStatus pf_classgroup_order(const char *delta, bool squares, uint64_t *out);

// Obstruction census as newline-delimited JSON records (empty string when
// the census is empty).
enum PfStatus pf_sha_census(const char *delta, char **out);

// Torsor action `mu(q, P)` for the class `F2[A,beta]` over the conic's
// discriminant.
enum PfStatus pf_torsor_mu(const struct PfConic *conic,
                           const char *class_,
                           const char *torsor_point,
                           const char *conic_point,
                           char **out);

// Torsor difference `nu(q2, q1)`, an on-conic point.
enum PfStatus pf_torsor_nu(const struct PfConic *conic,
                           const char *class_,
                           const char *second,
                           const char *first,
                           char **out);

// Bilinear composition of torsor points across two classes; JSON with the
// composed class and point.
enum PfStatus pf_torsor_circ(const char *delta,
                             const char *first_class,
                             const char *first_point,
                             const char *second_class,
                             const char *second_point,
                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PELLFORMS_H */
