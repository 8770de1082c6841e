#ifndef PCM_H
#define PCM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. Values 2-4 match the CLI exit codes.
 */
typedef enum PcmStatus {
  PCM_STATUS_OK = 0,
  PCM_STATUS_NULL_POINTER = 1,
  PCM_STATUS_INVALID_INPUT = 2,
  PCM_STATUS_DISCONNECTED = 3,
  PCM_STATUS_SOLVER_FAILURE = 4,
  PCM_STATUS_INVALID_ARGUMENT = 5,
  PCM_STATUS_BUFFER_TOO_SMALL = 6,
  PCM_STATUS_PANIC = 7,
} PcmStatus;

/**
 * Values accepted by [`pcm_complete`].
 */
typedef enum PcmCompletionMethod {
  PCM_COMPLETION_METHOD_LEX = 0,
  PCM_COMPLETION_METHOD_GCI = 1,
  PCM_COMPLETION_METHOD_CR = 2,
} PcmCompletionMethod;

/**
 * Values accepted by [`pcm_weights`].
 */
typedef enum PcmWeightingMethod {
  PCM_WEIGHTING_METHOD_EIGENVECTOR = 0,
  PCM_WEIGHTING_METHOD_LOG_LEAST_SQUARES = 1,
} PcmWeightingMethod;

/**
 * Completed matrix.
 */
typedef struct PcmCompleted PcmCompleted;

/**
 * Connected directed acyclic preference graph.
 */
typedef struct PcmDag PcmDag;

/**
 * Incomplete (or complete) input matrix.
 */
typedef struct PcmMatrix PcmMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty after a
 * success. Valid until the next call into this library on the same thread.
 */
const char *pcm_last_error_message(void);

/**
 * Parses a matrix in the text file format (NUL-terminated UTF-8).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be writable.
 */
enum PcmStatus pcm_matrix_parse(const char *text, struct PcmMatrix **out);

/**
 * Builds a matrix from `n * n` row-major `entries`; entry `k` is missing
 * when `known[k] == 0`. A null `known` means every entry is known.
 *
 * # Safety
 * `entries` (and `known` if non-null) must point to `n * n` readable values.
 */
enum PcmStatus pcm_matrix_new(size_t n,
                              const double *entries,
                              const uint8_t *known,
                              struct PcmMatrix **out);

/**
 * Order of the matrix, 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t pcm_matrix_order(const struct PcmMatrix *m);

/**
 * Number of missing pairs above the diagonal, 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t pcm_matrix_missing_count(const struct PcmMatrix *m);

/**
 * # Safety
 * `m` must be null or a handle not yet freed.
 */
void pcm_matrix_free(struct PcmMatrix *m);

/**
 * Builds a DAG on `n` vertices from `n_arcs` pairs `(from, to)` stored
 * flat in `arcs`.
 *
 * # Safety
 * `arcs` must point to `2 * n_arcs` readable values.
 */
enum PcmStatus pcm_dag_new(size_t n, const size_t *arcs, size_t n_arcs, struct PcmDag **out);

/**
 * Random connected DAG, reproducible from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PcmStatus pcm_dag_random(size_t n, double density, uint64_t seed, struct PcmDag **out);

/**
 * Incomplete matrix with `alpha` on every arc and its reciprocal opposite.
 *
 * # Safety
 * `dag` must be a live handle; `out` must be writable.
 */
enum PcmStatus pcm_dag_to_matrix(const struct PcmDag *dag, double alpha, struct PcmMatrix **out);

/**
 * # Safety
 * `dag` must be null or a handle not yet freed.
 */
void pcm_dag_free(struct PcmDag *dag);

/**
 * Completes `m` with a [`PcmCompletionMethod`] value.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum PcmStatus pcm_complete(const struct PcmMatrix *m, uint32_t method, struct PcmCompleted **out);

/**
 * Order of the completed matrix, 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
size_t pcm_completed_order(const struct PcmCompleted *c);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum PcmStatus pcm_completed_get(const struct PcmCompleted *c, size_t i, size_t j, double *out);

/**
 * Copies all `n * n` entries row-major into `buf` of capacity `len`.
 *
 * # Safety
 * `c` must be a live handle; `buf` must hold `len` writable values.
 */
enum PcmStatus pcm_completed_copy(const struct PcmCompleted *c, double *buf, size_t len);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void pcm_completed_free(struct PcmCompleted *c);

/**
 * Writes the `n` normalized weights from a [`PcmWeightingMethod`] value.
 *
 * # Safety
 * `c` must be a live handle; `out` must hold `len` writable values.
 */
enum PcmStatus pcm_weights(const struct PcmCompleted *c, uint32_t method, double *out, size_t len);

/**
 * Counts the known comparisons of `m` contradicted by the weights `w`.
 *
 * # Safety
 * `m` must be a live handle; `w` must hold `len` readable values.
 */
enum PcmStatus pcm_check_violations(const struct PcmMatrix *m,
                                    const double *w,
                                    size_t len,
                                    double eq_tol,
                                    size_t *out_count);

/**
 * Koczkodaj inconsistency index of a completed matrix.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum PcmStatus pcm_koczkodaj_ki(const struct PcmCompleted *c, double *out);

/**
 * Principal eigenvalue of a completed matrix.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum PcmStatus pcm_lambda_max(const struct PcmCompleted *c, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PCM_H */
