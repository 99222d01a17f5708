#ifndef LPQUTS_H
#define LPQUTS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define LQ_SAMPLER_GREEDY 0

#define LQ_SAMPLER_SA 1

#define LQ_SAMPLER_RYDBERG 2

typedef enum LqStatus {
  LQ_STATUS_OK = 0,
  LQ_STATUS_NULL_POINTER = 1,
  LQ_STATUS_INVALID_ARGUMENT = 2,
  LQ_STATUS_INVALID_GRAPH = 3,
  LQ_STATUS_PARSE = 4,
  LQ_STATUS_IO = 5,
  LQ_STATUS_TOO_LARGE = 6,
  LQ_STATUS_TIME_BUDGET = 7,
  LQ_STATUS_SOLVER = 8,
  LQ_STATUS_BUFFER_TOO_SMALL = 9,
  LQ_STATUS_PANIC = 10,
} LqStatus;

typedef enum LqTermination {
  LQ_TERMINATION_CONVERGED = 0,
  LQ_TERMINATION_PATIENCE = 1,
  LQ_TERMINATION_MAX_ITERATIONS = 2,
  LQ_TERMINATION_NO_VIOLATED_CUTS = 3,
} LqTermination;

/**
 * Opaque graph handle.
 */
typedef struct LqGraph LqGraph;

/**
 * Opaque solve report handle.
 */
typedef struct LqReport LqReport;

/**
 * Engine settings. Start from [`lq_solve_config_default`].
 */
typedef struct LqSolveConfig {
  uint32_t max_iterations;
  uint32_t patience;
  uint32_t shots;
  uint32_t alpha_steps;
  /**
   * One of the `LQ_SAMPLER_*` constants.
   */
  uint32_t sampler;
  /**
   * 0 selects `min(N, 40)`.
   */
  uint32_t max_subgraph;
  uint64_t seed;
  double tol_lp;
  double tol_dual;
  /**
   * false runs the separation at alpha = 0 only.
   */
  bool sample_informed;
} LqSolveConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread ("" after a success).
 * The pointer stays valid until the next call on the same thread.
 */
const char *lq_last_error(void);

/**
 * Builds a graph from `n` weights and `m` edges given as `2*m` vertex ids.
 *
 * # Safety
 * `weights` must point to `n` doubles, `edges` to `2*m` integers (may be
 * null when `m == 0`), and `out` must be writable.
 */
enum LqStatus lq_graph_new(size_t n,
                           const double *weights,
                           size_t m,
                           const uint32_t *edges,
                           struct LqGraph **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum LqStatus lq_graph_read(const char *path, struct LqGraph **out);

/**
 * # Safety
 * `graph` must come from this library; `path` must be NUL-terminated.
 */
enum LqStatus lq_graph_write(const struct LqGraph *graph, const char *path);

/**
 * Connected Erdős-Rényi graph.
 *
 * # Safety
 * `out` must be writable.
 */
enum LqStatus lq_graph_gen_er(size_t n,
                              double p,
                              bool weighted,
                              uint64_t seed,
                              struct LqGraph **out);

/**
 * Series-parallel graph with `n` vertices and unit weights.
 *
 * # Safety
 * `out` must be writable.
 */
enum LqStatus lq_graph_gen_sp(size_t n, uint64_t seed, struct LqGraph **out);

/**
 * # Safety
 * `graph` must be null or come from this library.
 */
size_t lq_graph_n(const struct LqGraph *graph);

/**
 * # Safety
 * `graph` must be null or come from this library.
 */
size_t lq_graph_m(const struct LqGraph *graph);

/**
 * # Safety
 * `graph` must be null or come from this library, and not be used again.
 */
void lq_graph_free(struct LqGraph *graph);

/**
 * Exact MWIS. `members` (capacity `cap`) receives the vertex ids; `count`
 * always receives the set size. `max_n = 0` uses the default guard;
 * `time_budget_s <= 0` means no limit.
 *
 * # Safety
 * Pointers must be valid; `members` may be null when `cap == 0`.
 */
enum LqStatus lq_exact(const struct LqGraph *graph,
                       size_t max_n,
                       double time_budget_s,
                       double *value,
                       uint32_t *members,
                       size_t cap,
                       size_t *count);

struct LqSolveConfig lq_solve_config_default(void);

/**
 * Runs the cutting-plane loop. `config` may be null for defaults.
 *
 * # Safety
 * `graph` must come from this library and `out` be writable.
 */
enum LqStatus lq_solve(const struct LqGraph *graph,
                       const struct LqSolveConfig *config,
                       struct LqReport **out);

/**
 * Final upper bound (NaN for a null report).
 *
 * # Safety
 * `report` must be null or come from this library.
 */
double lq_report_upper(const struct LqReport *report);

/**
 * Best independent-set weight (NaN for a null report).
 *
 * # Safety
 * `report` must be null or come from this library.
 */
double lq_report_lower(const struct LqReport *report);

/**
 * # Safety
 * `report` must be null or come from this library.
 */
size_t lq_report_iterations(const struct LqReport *report);

/**
 * # Safety
 * `report` must be null or come from this library.
 */
bool lq_report_converged(const struct LqReport *report);

/**
 * # Safety
 * `report` must come from this library.
 */
enum LqStatus lq_report_termination(const struct LqReport *report, enum LqTermination *out);

/**
 * Bounds recorded at 0-based iteration `index`.
 *
 * # Safety
 * `report` must come from this library; `upper` and `lower` writable.
 */
enum LqStatus lq_report_iteration_bounds(const struct LqReport *report,
                                         size_t index,
                                         double *upper,
                                         double *lower);

/**
 * Copies the best set's vertex ids; see [`lq_exact`] for the buffer rules.
 *
 * # Safety
 * `report` must come from this library; `count` writable; `members` valid
 * for `cap` writes.
 */
enum LqStatus lq_report_best_set(const struct LqReport *report,
                                 uint32_t *members,
                                 size_t cap,
                                 size_t *count);

/**
 * Full report as JSON; release with [`lq_string_free`]. Null on failure.
 *
 * # Safety
 * `report` must be null or come from this library.
 */
char *lq_report_json(const struct LqReport *report);

/**
 * # Safety
 * `s` must be null or come from [`lq_report_json`], and not be used again.
 */
void lq_string_free(char *s);

/**
 * # Safety
 * `report` must be null or come from this library, and not be used again.
 */
void lq_report_free(struct LqReport *report);

/**
 * Sample-to-target for `len` sample costs. Writes NaN when no sample reaches
 * the target.
 *
 * # Safety
 * `costs` must point to `len` doubles and `out` be writable.
 */
enum LqStatus lq_stt(const double *costs, size_t len, double c_opt, double epsilon, double *out);

/**
 * `1 - best/c_opt` clamped to `[0, 1]`; NaN when `c_opt <= 0`.
 */
double lq_optimality_gap(double best, double c_opt);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPQUTS_H */
