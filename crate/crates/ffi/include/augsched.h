#ifndef AUGSCHED_H
#define AUGSCHED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AugStatus {
  AUG_STATUS_OK = 0,
  AUG_STATUS_NULL_POINTER = 1,
  AUG_STATUS_INVALID_LINK = 2,
  AUG_STATUS_INVALID_NODE = 3,
  AUG_STATUS_INVALID_GRAPH = 4,
  AUG_STATUS_NOT_A_MATCHING = 5,
  AUG_STATUS_LENGTH_MISMATCH = 6,
  AUG_STATUS_CAP_EXCEEDED = 7,
  AUG_STATUS_DOMAIN = 8,
  AUG_STATUS_CONFIG = 9,
  AUG_STATUS_IO = 10,
  AUG_STATUS_PARSE = 11,
  AUG_STATUS_BUFFER_TOO_SMALL = 12,
  AUG_STATUS_PANIC = 13,
} AugStatus;

typedef enum AugAlgorithm {
  AUG_ALGORITHM_AUG = 0,
  AUG_ALGORITHM_MM = 1,
} AugAlgorithm;

typedef enum AugPreset {
  /**
   * Grid only: heavy/light/vertical = 0.7/0.1/0.1.
   */
  AUG_PRESET_FIG5 = 0,
  /**
   * Grid only: 0.89/0.1/0.01.
   */
  AUG_PRESET_FIG6 = 1,
  /**
   * λ/Δ on every link.
   */
  AUG_PRESET_UNIFORM = 2,
} AugPreset;

/**
 * Opaque network handle.
 */
typedef struct AugGraph AugGraph;

/**
 * One simulation run. Zero-initialise and fill the fields you need;
 * `warmup == 0` means one fifth of `horizon`, `slope_threshold <= 0` means
 * the library default.
 */
typedef struct AugSimConfig {
  enum AugAlgorithm algorithm;
  size_t k;
  double p;
  enum AugPreset preset;
  double lambda;
  uint64_t horizon;
  uint64_t warmup;
  uint64_t seed;
  double slope_threshold;
} AugSimConfig;

typedef struct AugSimResult {
  double avg_total_backlog;
  uint64_t final_total_backlog;
  double backlog_slope;
  bool stable;
} AugSimResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *augsched_last_error(void);

/**
 * Empty graph with `node_count` nodes.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum AugStatus augsched_graph_new(size_t node_count, struct AugGraph **out);

/**
 * `rows × cols` grid; node `(r, c)` has id `r·cols + c`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum AugStatus augsched_graph_grid(size_t rows, size_t cols, struct AugGraph **out);

/**
 * Reads a graph file (`nodes N` then `link u v` lines).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum AugStatus augsched_graph_from_file(const char *path, struct AugGraph **out);

/**
 * Releases a graph. NULL is ignored.
 *
 * # Safety
 * `g` must come from an `augsched_graph_*` constructor and not be used again.
 */
void augsched_graph_free(struct AugGraph *g);

/**
 * Adds link `u`–`v` and writes its id to `out_link` (may be NULL).
 *
 * # Safety
 * `g` must be a live graph handle.
 */
enum AugStatus augsched_graph_add_link(struct AugGraph *g, size_t u, size_t v, size_t *out_link);

/**
 * # Safety
 * `g` must be a live graph handle or NULL (returns 0).
 */
size_t augsched_graph_node_count(const struct AugGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle or NULL (returns 0).
 */
size_t augsched_graph_link_count(const struct AugGraph *g);

/**
 * Brute-force maximum-weight matching under queue lengths `q`
 * (`q_len` must equal the link count). Ids go to `out_links` in ascending
 * order; `*out_len` is set even when the buffer is too small.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum AugStatus augsched_max_weight_matching(const struct AugGraph *g,
                                            const uint64_t *q,
                                            size_t q_len,
                                            size_t *out_links,
                                            size_t out_cap,
                                            size_t *out_len,
                                            uint64_t *out_weight);

/**
 * Lower bound on the probability that one control part reaches the
 * approximation target.
 *
 * # Safety
 * `out` must be writable.
 */
enum AugStatus augsched_delta_lower_bound(double p,
                                          size_t n,
                                          size_t k,
                                          size_t max_degree,
                                          double *out);

/**
 * One distributed control part from schedule `prev` (link ids) under
 * queues `q`, seeded by `seed`. Writes the new schedule's link ids.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum AugStatus augsched_control_part(const struct AugGraph *g,
                                     const uint64_t *q,
                                     size_t q_len,
                                     const size_t *prev,
                                     size_t prev_len,
                                     size_t k,
                                     double p,
                                     uint64_t seed,
                                     size_t *out_links,
                                     size_t out_cap,
                                     size_t *out_len);

/**
 * Simulates one run on `g` and fills `out`. Grid presets need a graph made
 * by [`augsched_graph_grid`] that has not been modified since.
 *
 * # Safety
 * `g`, `config` and `out` must be valid.
 */
enum AugStatus augsched_run_simulation(const struct AugGraph *g,
                                       const struct AugSimConfig *config,
                                       struct AugSimResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AUGSCHED_H */
