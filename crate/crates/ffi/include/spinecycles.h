#ifndef SPINECYCLES_H
#define SPINECYCLES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_NULL_POINTER = 1,
  SC_STATUS_INVALID_ARGUMENT = 2,
  SC_STATUS_BOUND_VIOLATION = 3,
  SC_STATUS_OUT_OF_RANGE = 4,
  SC_STATUS_GRAPH_FAILURE = 5,
  SC_STATUS_PANIC = 6,
} ScStatus;

/**
 * Sorted list of discriminants.
 */
typedef struct ScDiscSet ScDiscSet;

/**
 * Supersingular isogeny graph.
 */
typedef struct ScGraph ScGraph;

typedef struct ScCycleCounts {
  uint64_t n_s;
  uint64_t n_t;
  /**
   * Largest number of spine vertices on one cycle.
   */
  uint64_t max_spine_count;
  uint8_t tainted;
} ScCycleCounts;

typedef struct ScPrediction {
  uint64_t n_s;
  uint64_t n_t;
  /**
   * Nonzero when `p` exceeds the Kaneko bound.
   */
  uint8_t valid;
  /**
   * Nonzero when `r` is a power of two.
   */
  uint8_t experimental;
} ScPrediction;

/**
 * Bounds as fractions; `strong_den` is 0 for odd `r`.
 */
typedef struct ScBound {
  uint64_t m_num;
  uint64_t m_den;
  uint64_t strong_num;
  uint64_t strong_den;
} ScBound;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *sc_last_error_message(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum ScStatus sc_graph_build(uint64_t p, uint64_t ell, uint64_t seed, struct ScGraph **out);

/**
 * # Safety
 * `graph` must come from [`sc_graph_build`] and not be used afterwards.
 */
void sc_graph_free(struct ScGraph *graph);

/**
 * # Safety
 * `graph` must be null or a live handle.
 */
uintptr_t sc_graph_vertex_count(const struct ScGraph *graph);

/**
 * # Safety
 * `graph` must be null or a live handle.
 */
uintptr_t sc_graph_spine_size(const struct ScGraph *graph);

/**
 * j-invariant of vertex `index` as `a + b·√s`.
 *
 * # Safety
 * `graph` must be a live handle; `a` and `b` valid for writes.
 */
enum ScStatus sc_graph_vertex(const struct ScGraph *graph,
                              uintptr_t index,
                              uint64_t *a,
                              uint64_t *b);

/**
 * # Safety
 * `graph` must be a live handle; `out` valid for writes.
 */
enum ScStatus sc_graph_cycle_census(const struct ScGraph *graph,
                                    uint32_t r,
                                    struct ScCycleCounts *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum ScStatus sc_predict(uint64_t ell, uint32_t r, uint64_t p, struct ScPrediction *out);

/**
 * Average spine count as `num / den`.
 *
 * # Safety
 * `num`, `den` and `conjectural` must be valid for writes.
 */
enum ScStatus sc_average_limit(uint64_t ell,
                               uint32_t r,
                               int64_t *num,
                               int64_t *den,
                               uint8_t *conjectural);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum ScStatus sc_kaneko_bound(uint64_t ell, uint32_t r, struct ScBound *out);

/**
 * Discriminants whose prime above `ell` has order dividing `r`, or exactly
 * `r` when `exact` is nonzero.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ScStatus sc_disc_set_new(uint64_t ell, uint32_t r, uint8_t exact, struct ScDiscSet **out);

/**
 * # Safety
 * `set` must be null or a live handle.
 */
uintptr_t sc_disc_set_len(const struct ScDiscSet *set);

/**
 * # Safety
 * `set` must be a live handle; `out` valid for writes.
 */
enum ScStatus sc_disc_set_get(const struct ScDiscSet *set, uintptr_t index, int64_t *out);

/**
 * # Safety
 * `set` must come from [`sc_disc_set_new`] and not be used afterwards.
 */
void sc_disc_set_free(struct ScDiscSet *set);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINECYCLES_H */
