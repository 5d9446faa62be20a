#ifndef NEUMANN_WITNESS_H
#define NEUMANN_WITNESS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum NwStatus {
  NW_STATUS_OK = 0,
  /**
   * A required pointer was null or a string was not UTF-8.
   */
  NW_STATUS_NULL_OR_INVALID_ARGUMENT = 1,
  /**
   * Malformed JSON or a value outside the domain of the operation.
   */
  NW_STATUS_INPUT_ERROR = 2,
  /**
   * Constant eigenfunctions have no witness.
   */
  NW_STATUS_CONSTANT_EIGENFUNCTION = 3,
  /**
   * The spectrum of a generic rectangle cannot be enumerated exactly.
   */
  NW_STATUS_NOT_EXACTLY_ENUMERABLE = 4,
  /**
   * The trace minimization did not reach the threshold.
   */
  NW_STATUS_NUMERICAL_INCONCLUSIVE = 5,
  /**
   * A mathematical invariant failed.
   */
  NW_STATUS_INCONSISTENT_SPECTRUM = 6,
  /**
   * An internal panic was caught at the boundary.
   */
  NW_STATUS_PANIC = 7,
} NwStatus;

typedef enum NwEdge {
  NW_EDGE_BOTTOM = 0,
  NW_EDGE_TOP = 1,
  NW_EDGE_LEFT = 2,
  NW_EDGE_RIGHT = 3,
} NwEdge;

/**
 * Parity class of a sum of two squares: `I` for `2·4^s(2ℓ+1)`, `J` for `4^s(2ℓ+1)`.
 */
typedef enum NwParityClass {
  NW_PARITY_CLASS_I = 0,
  NW_PARITY_CLASS_J = 1,
} NwParityClass;

/**
 * Opaque certificate handle.
 */
typedef struct NwCertificate NwCertificate;

/**
 * Opaque eigenfunction handle.
 */
typedef struct NwEigenfunction NwEigenfunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *nw_last_error(void);

/**
 * Parse an eigenfunction from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NwStatus nw_eigenfunction_from_json(const char *json, struct NwEigenfunction **out);

/**
 * # Safety
 * `u` must come from [`nw_eigenfunction_from_json`] and not be used afterwards. Null is ignored.
 */
void nw_eigenfunction_free(struct NwEigenfunction *u);

/**
 * Value at `(x, y)`; points outside the closed rectangle are an input error.
 *
 * # Safety
 * `u` must be a live handle and `out` a valid pointer.
 */
enum NwStatus nw_eigenfunction_evaluate(const struct NwEigenfunction *u,
                                        double x,
                                        double y,
                                        double *out);

/**
 * Sampled and refined minimum over the boundary.
 *
 * # Safety
 * `u` must be a live handle and `out` a valid pointer.
 */
enum NwStatus nw_eigenfunction_boundary_min(const struct NwEigenfunction *u,
                                            size_t samples_per_edge,
                                            double *out);

/**
 * Build a certificate of boundary non-positivity.
 *
 * # Safety
 * `u` must be a live handle and `out` a valid pointer.
 */
enum NwStatus nw_witness(const struct NwEigenfunction *u, struct NwCertificate **out);

/**
 * Parse a certificate from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NwStatus nw_certificate_from_json(const char *json, struct NwCertificate **out);

/**
 * JSON form of a certificate; release it with [`nw_string_free`].
 *
 * # Safety
 * `cert` must be a live handle and `out` a valid pointer.
 */
enum NwStatus nw_certificate_to_json(const struct NwCertificate *cert, char **out);

/**
 * Number of boundary points in a certificate.
 *
 * # Safety
 * `cert` must be a live handle or null (which yields 0).
 */
size_t nw_certificate_point_count(const struct NwCertificate *cert);

/**
 * Edge and edge parameter of point `index`.
 *
 * # Safety
 * `cert` must be a live handle; `edge` and `t` valid pointers.
 */
enum NwStatus nw_certificate_point(const struct NwCertificate *cert,
                                   size_t index,
                                   enum NwEdge *edge,
                                   double *t);

/**
 * `verified` is set when the minimum over the certificate points is at most
 * `tol·(1 + max |coefficient|)` and the stated relation between the values holds.
 *
 * # Safety
 * `u` and `cert` must be live handles and `verified` a valid pointer.
 */
enum NwStatus nw_verify(const struct NwEigenfunction *u,
                        const struct NwCertificate *cert,
                        double tol,
                        bool *verified);

/**
 * # Safety
 * `cert` must come from this library and not be used afterwards. Null is ignored.
 */
void nw_certificate_free(struct NwCertificate *cert);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void nw_string_free(char *s);

/**
 * `lam = 4^s·(2ℓ+1)` (class J) or `2·4^s·(2ℓ+1)` (class I).
 *
 * # Safety
 * All output pointers must be valid.
 */
enum NwStatus nw_decompose(uint64_t lam, uint32_t *s, uint64_t *ell, enum NwParityClass *class_);

/**
 * Count violations of the two-square parity structure for `λ ≤ lam_max`.
 *
 * # Safety
 * `violations` must be a valid pointer.
 */
enum NwStatus nw_check_proposition(uint64_t lam_max, uint64_t *violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEUMANN_WITNESS_H */
