/* C interface for the multicomplex kernel. */

#ifndef MCX_H
#define MCX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of the most recent fallible call on the current thread.
 */
typedef enum McxStatus {
  MCX_STATUS_OK = 0,
  MCX_STATUS_NULL_POINTER = 1,
  MCX_STATUS_INVALID_UTF8 = 2,
  MCX_STATUS_PARSE_ERROR = 3,
  MCX_STATUS_LEVEL_ERROR = 4,
  MCX_STATUS_DIMENSION_ERROR = 5,
  MCX_STATUS_INDEX_ERROR = 6,
  MCX_STATUS_NULL_CONE = 7,
  MCX_STATUS_SINGULAR = 8,
  MCX_STATUS_NOT_SELF_ADJOINT = 9,
  MCX_STATUS_NOT_MULTIPERPLEX = 10,
  MCX_STATUS_NUMERIC_ERROR = 11,
} McxStatus;

/**
 * Opaque multicomplex number.
 */
typedef struct McxNumber McxNumber;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Status code of the most recent fallible call on this thread.
 */
enum McxStatus mcx_last_error_code(void);

/**
 * Message of the most recent fallible call on this thread. The pointer
 * stays valid until the next fallible call on the same thread; do not
 * free it.
 */
const char *mcx_last_error_message(void);

/**
 * Builds a number from `len` standard coefficients in unit-subset
 * bitmask order; `len` must be 2^n. Returns null on error.
 * # Safety
 * `coeffs` must be null or point to `len` readable doubles.
 */
struct McxNumber *mcx_number_new(uintptr_t n, const double *coeffs, uintptr_t len);

/**
 * Parses and evaluates an expression such as "(1 + i1i2)/2" at level
 * `n`. Returns null on error.
 * # Safety
 * `source` must be null or a NUL-terminated string that stays valid for the call.
 */
struct McxNumber *mcx_number_from_expr(uintptr_t n, const char *source);

/**
 * Deserializes a number document, either representation.
 * # Safety
 * `text` must be null or a NUL-terminated string that stays valid for the call.
 */
struct McxNumber *mcx_number_from_json(const char *text);

/**
 * Serializes to a number document; `idempotent` selects the
 * representation and requires level 2 or more. Free the result with
 * `mcx_string_free`.
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
char *mcx_number_to_json(const struct McxNumber *h, bool idempotent);

/**
 * Human-readable standard form, terms in graded order. Free with
 * `mcx_string_free`.
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
char *mcx_number_render(const struct McxNumber *h);

/**
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
struct McxNumber *mcx_number_clone(const struct McxNumber *h);

/**
 * Releases a number handle. Null is ignored.
 * # Safety
 * `h` must be null or an unfreed handle returned by this library; it is invalid after the call.
 */
void mcx_number_free(struct McxNumber *h);

/**
 * Level n of the number, or 0 for a null handle.
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
uintptr_t mcx_number_level(const struct McxNumber *h);

/**
 * Number of standard coefficients (2^n), or 0 for a null handle.
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
uintptr_t mcx_number_coeff_count(const struct McxNumber *h);

/**
 * Copies the standard coefficients into `out`, which must hold exactly
 * 2^n values.
 * # Safety
 * `h` must be null or a live handle returned by this library.
 * `out` must be null or point to `len` writable doubles.
 */
enum McxStatus mcx_number_coeffs(const struct McxNumber *h, double *out, uintptr_t len);

/**
 * Copies the canonical components into `out` as interleaved re, im
 * pairs; `len` must be 2 * 2^(n-1). Requires level 2 or more.
 * # Safety
 * `h` must be null or a live handle returned by this library.
 * `out` must be null or point to `len` writable doubles.
 */
enum McxStatus mcx_number_components(const struct McxNumber *h, double *out, uintptr_t len);

/**
 * # Safety
 * `a` and `b` must each be null or live handles returned by this library.
 */
struct McxNumber *mcx_number_add(const struct McxNumber *a, const struct McxNumber *b);

/**
 * # Safety
 * `a` and `b` must each be null or live handles returned by this library.
 */
struct McxNumber *mcx_number_sub(const struct McxNumber *a, const struct McxNumber *b);

/**
 * Product through the componentwise fast path above level 1.
 * # Safety
 * `a` and `b` must each be null or live handles returned by this library.
 */
struct McxNumber *mcx_number_mul(const struct McxNumber *a, const struct McxNumber *b);

/**
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
struct McxNumber *mcx_number_scale(const struct McxNumber *h, double factor);

/**
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
struct McxNumber *mcx_number_neg(const struct McxNumber *h);

/**
 * Applies the conjugation selected by `mask`: bit k-1 flips the sign of
 * unit k. A zero mask is the identity; the all-ones mask is the total
 * conjugation.
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
struct McxNumber *mcx_number_conjugate(const struct McxNumber *h, uint32_t mask);

/**
 * Multiplicative inverse. Fails with `MCX_STATUS_NULL_CONE` when some
 * canonical component is within `tol` of zero (relative to the largest
 * component).
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
struct McxNumber *mcx_number_invert(const struct McxNumber *h, double tol);

/**
 * Multiperplex norm, returned as a number with real canonical
 * components. At level 1 this is the complex modulus.
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
struct McxNumber *mcx_number_norm(const struct McxNumber *h);

/**
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
bool mcx_number_is_zero(const struct McxNumber *h);

/**
 * True when the number is nonzero yet has a canonical component within
 * `tol` of zero, making it non-invertible.
 * # Safety
 * `h` must be null or a live handle returned by this library.
 */
bool mcx_number_is_zero_divisor(const struct McxNumber *h, double tol);

/**
 * Componentwise comparison with relative tolerance.
 * # Safety
 * `a` and `b` must each be null or live handles returned by this library.
 */
bool mcx_number_equals(const struct McxNumber *a, const struct McxNumber *b, double tol);

/**
 * Frees a string returned by this library. Null is ignored.
 * # Safety
 * `s` must be null or an unfreed string returned by this library; it is invalid after the call.
 */
void mcx_string_free(char *s);

/**
 * Determinant of a matrix document, returned as a number document in
 * the input's representation. `singular` (optional) receives whether
 * some component determinant is within `tol` of zero.
 * # Safety
 * `doc` must be null or a NUL-terminated string that stays valid for the call.
 * `singular` must be null or point to a writable bool.
 */
char *mcx_det_json(const char *doc, double tol, bool *singular);

/**
 * Inverse of a matrix document, in the input's representation. Fails
 * with `MCX_STATUS_SINGULAR` when some component matrix is singular.
 * # Safety
 * `doc` must be null or a NUL-terminated string that stays valid for the call.
 */
char *mcx_inv_json(const char *doc, double tol);

/**
 * Spectral decomposition of a self-adjoint matrix document. The result
 * object carries multiperplex eigenvalue documents, eigenket documents,
 * and the reconstruction residual. Fails with
 * `MCX_STATUS_NOT_SELF_ADJOINT` when some component slice is not
 * Hermitian within `tol`.
 * # Safety
 * `doc` must be null or a NUL-terminated string that stays valid for the call.
 */
char *mcx_eig_json(const char *doc, double tol);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MCX_H */
