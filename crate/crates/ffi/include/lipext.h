#ifndef LIPEXT_H
#define LIPEXT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum LipextStatus {
  LIPEXT_STATUS_OK = 0,
  LIPEXT_STATUS_NULL_POINTER = 1,
  /**
   * Invalid input: bad shapes, invalid metric, mismatched anchors.
   */
  LIPEXT_STATUS_INVALID_INPUT = 2,
  /**
   * Rank-deficient embedding or least-squares failure.
   */
  LIPEXT_STATUS_NUMERICAL = 3,
  LIPEXT_STATUS_IO = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  LIPEXT_STATUS_PANIC = 5,
} LipextStatus;

/**
 * Opaque operator handle.
 */
typedef struct LipextOperator LipextOperator;

/**
 * Certificate for a built operator.
 */
typedef struct LipextCertificate {
  double rms_sample_lip;
  double s_min;
  /**
   * Certified Lipschitz bound, `rms_sample_lip / s_min`.
   */
  double bound;
  double theory_reference;
} LipextCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds an operator for anchors given by Euclidean coordinates
 * (`n × dim`) with values `n × p`. `samples = 0` selects `max(64·p, 1024)`.
 */
enum LipextStatus lipext_operator_build_euclidean(const double *anchor_coords,
                                                  size_t n,
                                                  size_t dim,
                                                  const double *values,
                                                  size_t p,
                                                  uint64_t seed,
                                                  size_t samples,
                                                  struct LipextOperator **out);

/**
 * Builds an operator for anchors given by an `n × n` distance matrix.
 */
enum LipextStatus lipext_operator_build_explicit(const double *anchor_dists,
                                                 size_t n,
                                                 const double *values,
                                                 size_t p,
                                                 uint64_t seed,
                                                 size_t samples,
                                                 struct LipextOperator **out);

/**
 * Evaluates at `q` query points given by coordinates (`q × dim`). Writes
 * `q × p` values to `out`. Requires an operator built from coordinates.
 */
enum LipextStatus lipext_operator_evaluate_euclidean(const struct LipextOperator *op,
                                                     const double *query_coords,
                                                     size_t q,
                                                     size_t dim,
                                                     double *out);

/**
 * Evaluates at `q` query points given by their distances to every anchor
 * (`q × n`). Writes `q × p` values to `out`.
 */
enum LipextStatus lipext_operator_evaluate_explicit(const struct LipextOperator *op,
                                                    const double *anchor_dists,
                                                    size_t q,
                                                    double *out);

enum LipextStatus lipext_operator_certificate(const struct LipextOperator *op,
                                              struct LipextCertificate *out);

/**
 * Largest relative residual `‖F(t) − f(t)‖ / (1 + ‖f(t)‖)` over the anchors.
 */
enum LipextStatus lipext_operator_exactness(const struct LipextOperator *op, double *out);

/**
 * Number of anchors, or 0 for a null handle.
 */
size_t lipext_operator_anchor_count(const struct LipextOperator *op);

/**
 * Target dimension, or 0 for a null handle.
 */
size_t lipext_operator_dim(const struct LipextOperator *op);

/**
 * Number of Gaussian samples, or 0 for a null handle.
 */
size_t lipext_operator_samples(const struct LipextOperator *op);

/**
 * Writes the operator file (anchor values, per-sample constants, seed).
 */
enum LipextStatus lipext_operator_save(const struct LipextOperator *op, const char *path);

/**
 * Loads an operator file; the anchor coordinates are supplied again since
 * the file stores only values.
 */
enum LipextStatus lipext_operator_load_euclidean(const char *path,
                                                 const double *anchor_coords,
                                                 size_t n,
                                                 size_t dim,
                                                 struct LipextOperator **out);

enum LipextStatus lipext_operator_load_explicit(const char *path,
                                                const double *anchor_dists,
                                                size_t n,
                                                struct LipextOperator **out);

/**
 * Releases a handle. Null is ignored.
 */
void lipext_operator_free(struct LipextOperator *op);

/**
 * `2 ln m + 4`, the bound on the expected maximum of `m ≥ 2` squared
 * standard Gaussians.
 */
enum LipextStatus lipext_max_square_bound(size_t m, double *out);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *lipext_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lipext_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIPEXT_H */
