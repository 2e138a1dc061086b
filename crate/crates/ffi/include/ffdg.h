#ifndef FFDG_H
#define FFDG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FfdgGraphKind {
  FFDG_GRAPH_PATH = 0,
  FFDG_GRAPH_CYCLE = 1,
  FFDG_GRAPH_COMPLETE = 2,
  FFDG_GRAPH_STAR = 3,
} FfdgGraphKind;

typedef enum FfdgStatus {
  FFDG_OK = 0,
  FFDG_NULL_POINTER = 1,
  FFDG_INVALID_ARGUMENT = 2,
  FFDG_PARSE = 3,
  FFDG_BUDGET = 4,
  FFDG_OVERFLOW = 5,
  FFDG_IO = 6,
  FFDG_PANIC = 7,
} FfdgStatus;

typedef struct FfdgField FfdgField;

typedef struct FfdgGraph FfdgGraph;

typedef struct FfdgPointSet FfdgPointSet;

typedef struct FfdgComplex {
  double re;
  double im;
} FfdgComplex;

/**
 * A character sum; `bound` is meaningful only when `has_bound` is set.
 */
typedef struct FfdgSum {
  struct FfdgComplex value;
  double magnitude;
  double bound;
  bool has_bound;
  bool passes;
} FfdgSum;

/**
 * Embedding counts with floating normalizations.
 */
typedef struct FfdgCount {
  uint64_t c;
  uint64_t c_star;
  double n;
  double n_star;
} FfdgCount;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *ffdg_last_error(void);

/**
 * Builds F_{p^k} with the default modulus.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum FfdgStatus ffdg_field_new(uint32_t p, uint32_t k, struct FfdgField **out);

/**
 * Builds a field from a spec string such as `"9"`, `"3^2"` or `"3^2/2,2,1"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum FfdgStatus ffdg_field_parse(const char *spec, struct FfdgField **out);

/**
 * # Safety
 * `field` must be NULL or a handle from this library not yet freed.
 */
void ffdg_field_free(struct FfdgField *field);

/**
 * The field order q, or 0 for a NULL handle.
 *
 * # Safety
 * `field` must be NULL or a live handle.
 */
uint32_t ffdg_field_order(const struct FfdgField *field);

/**
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum FfdgStatus ffdg_field_trace(const struct FfdgField *field, uint32_t a, uint32_t *out);

/**
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum FfdgStatus ffdg_field_additive_char(const struct FfdgField *field,
                                         uint32_t a,
                                         struct FfdgComplex *out);

/**
 * Writes +1 or -1; a = 0 is an invalid argument.
 *
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum FfdgStatus ffdg_field_quadratic_char(const struct FfdgField *field, uint32_t a, int8_t *out);

/**
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum FfdgStatus ffdg_gauss_sum(const struct FfdgField *field, struct FfdgSum *out);

/**
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum FfdgStatus ffdg_kloosterman(const struct FfdgField *field,
                                 uint32_t a,
                                 uint32_t b,
                                 struct FfdgSum *out);

/**
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum FfdgStatus ffdg_salie(const struct FfdgField *field,
                           uint32_t a,
                           uint32_t b,
                           struct FfdgSum *out);

/**
 * E sigma_lambda = q^(1-d) |S_lambda| over F_q^d.
 *
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum FfdgStatus ffdg_sigma_mean(const struct FfdgField *field,
                                size_t d,
                                uint32_t lambda,
                                double *out);

/**
 * Seeded Bernoulli(density) subset of F_q^d.
 *
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum FfdgStatus ffdg_set_random(const struct FfdgField *field,
                                size_t d,
                                double density,
                                uint64_t seed,
                                struct FfdgPointSet **out);

/**
 * Set of the given vector indices; `indices` may be NULL when `len` is 0.
 *
 * # Safety
 * `indices` must point to `len` readable values; `field` must be live and
 * `out` writable.
 */
enum FfdgStatus ffdg_set_from_indices(const struct FfdgField *field,
                                      size_t d,
                                      const uint32_t *indices,
                                      size_t len,
                                      struct FfdgPointSet **out);

/**
 * Parses the point-set text format.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` writable.
 */
enum FfdgStatus ffdg_set_parse(const char *source, struct FfdgPointSet **out);

/**
 * Number of points, or 0 for a NULL handle.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
size_t ffdg_set_len(const struct FfdgPointSet *set);

/**
 * |A| / q^d, or 0 for a NULL handle.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
double ffdg_set_density(const struct FfdgPointSet *set);

/**
 * # Safety
 * `set` must be NULL or a handle from this library not yet freed.
 */
void ffdg_set_free(struct FfdgPointSet *set);

/**
 * Parses the graph text format (`n N` then `e i j lambda` lines).
 *
 * # Safety
 * `text` must be NUL-terminated; `out` writable.
 */
enum FfdgStatus ffdg_graph_parse(const char *source, struct FfdgGraph **out);

/**
 * A generated graph with every edge of length `lambda`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FfdgStatus ffdg_graph_generate(enum FfdgGraphKind kind,
                                    size_t n,
                                    uint32_t lambda,
                                    struct FfdgGraph **out);

/**
 * Number of edges, or 0 for a NULL handle.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t ffdg_graph_edge_count(const struct FfdgGraph *graph);

/**
 * # Safety
 * `graph` must be NULL or a handle from this library not yet freed.
 */
void ffdg_graph_free(struct FfdgGraph *graph);

/**
 * Counts embeddings of `graph` in `set`. With `oracle` set, enumerates all
 * tuples subject to `budget` tuple-edge checks. Counts above 2^64 - 1
 * report FFDG_OVERFLOW.
 *
 * # Safety
 * `set` and `graph` must be live handles and `out` writable.
 */
enum FfdgStatus ffdg_count(const struct FfdgPointSet *set,
                           const struct FfdgGraph *graph,
                           bool oracle,
                           uint64_t budget,
                           struct FfdgCount *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FFDG_H */
