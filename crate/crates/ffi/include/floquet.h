#ifndef FLOQUET_H
#define FLOQUET_H

#include <stddef.h>
#include <stdint.h>

/*
 Which spectra `floquet_isospectral` compares.
 */
typedef enum FloquetMode {
  FLOQUET_MODE_FLOQUET = 0,
  FLOQUET_MODE_PERIODIC = 1,
} FloquetMode;

/*
 Result codes shared by every call.
 */
typedef enum FloquetStatus {
  FLOQUET_STATUS_OK = 0,
  /*
   A decision returned "no" (not isospectral).
   */
  FLOQUET_STATUS_FALSE = 1,
  FLOQUET_STATUS_INVALID_ARGUMENT = 2,
  FLOQUET_STATUS_PARSE = 3,
  FLOQUET_STATUS_INVALID_GRAPH = 4,
  FLOQUET_STATUS_CAP_EXCEEDED = 5,
  FLOQUET_STATUS_POTENTIAL_SIZE = 6,
  FLOQUET_STATUS_VERIFICATION_FAILED = 7,
  FLOQUET_STATUS_PANIC = 8,
} FloquetStatus;

/*
 Opaque fundamental graph.
 */
typedef struct FloquetGraph FloquetGraph;

/*
 Opaque potential with exact rational values.
 */
typedef struct FloquetPotential FloquetPotential;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. Valid until
 the next failing call on the same thread.
 */
const char *floquet_last_error(void);

/*
 Parses a graph file. An embedded potential, if present, is kept and can
 be retrieved with `floquet_graph_potential`.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FloquetStatus floquet_graph_parse(const char *text, struct FloquetGraph **out);

/*
 Builds `cycle N`, `pendant`, `kagome` or `zd P1,...,Pd`.

 # Safety
 `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FloquetStatus floquet_graph_builtin(const char *name, struct FloquetGraph **out);

/*
 # Safety
 `graph` must come from this library and not be used afterwards.
 */
void floquet_graph_free(struct FloquetGraph *graph);

/*
 Number of vertices `ν`, or 0 for NULL.

 # Safety
 `graph` must be NULL or a live handle.
 */
uintptr_t floquet_graph_vertex_count(const struct FloquetGraph *graph);

/*
 Lattice dimension `d`, or 0 for NULL.

 # Safety
 `graph` must be NULL or a live handle.
 */
uintptr_t floquet_graph_dim(const struct FloquetGraph *graph);

/*
 Copies the potential embedded in the graph file. Fails with
 `FLOQUET_STATUS_INVALID_ARGUMENT` if the file had none.

 # Safety
 `graph` must be a live handle and `out` a valid pointer.
 */
enum FloquetStatus floquet_graph_potential(const struct FloquetGraph *graph,
                                           struct FloquetPotential **out);

/*
 Parses a potential file (`vertices N` plus `potential` lines).

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FloquetStatus floquet_potential_parse(const char *text, struct FloquetPotential **out);

/*
 Real potential with values `numer[i] / denom[i]`.

 # Safety
 `numer` and `denom` must point to `len` values; `out` must be valid.
 */
enum FloquetStatus floquet_potential_from_fractions(const int64_t *numer,
                                                    const int64_t *denom,
                                                    uintptr_t len,
                                                    struct FloquetPotential **out);

/*
 # Safety
 `potential` must come from this library and not be used afterwards.
 */
void floquet_potential_free(struct FloquetPotential *potential);

/*
 Invariant table for `n <= max_n` as JSON. `max_n = 0` means `ν`,
 `cap = 0` the default length cap.

 # Safety
 `graph` must be a live handle and `out_json` a valid pointer.
 */
enum FloquetStatus floquet_invariants_json(const struct FloquetGraph *graph,
                                           uintptr_t max_n,
                                           uintptr_t cap,
                                           char **out_json);

/*
 Returns `FLOQUET_STATUS_OK` if isospectral and `FLOQUET_STATUS_FALSE`
 otherwise. If `out_json` is not NULL it receives the verdict with its
 witness as JSON.

 # Safety
 Handles must be live; `out_json` must be NULL or valid.
 */
enum FloquetStatus floquet_isospectral(const struct FloquetGraph *graph,
                                       const struct FloquetPotential *q1,
                                       const struct FloquetPotential *q2,
                                       enum FloquetMode mode,
                                       uintptr_t cap,
                                       char **out_json);

/*
 Checks the trace formula for `n <= max_n` (0 means `ν`) on a `grid^d`
 grid plus `samples` random quasimomenta. Returns
 `FLOQUET_STATUS_VERIFICATION_FAILED` if the relative residual exceeds
 `tol`. `max_residual` may be NULL.

 # Safety
 Handles must be live; `max_residual` must be NULL or valid.
 */
enum FloquetStatus floquet_verify_trace(const struct FloquetGraph *graph,
                                        const struct FloquetPotential *potential,
                                        uintptr_t max_n,
                                        uintptr_t grid,
                                        uintptr_t samples,
                                        uint64_t seed,
                                        double tol,
                                        double *max_residual);

/*
 # Safety
 `text` must be NULL or a string returned by this library.
 */
void floquet_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLOQUET_H */
