#ifndef ELLIPTOPE_H
#define ELLIPTOPE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum EllStatus {
  ELL_STATUS_OK = 0,
  ELL_STATUS_NULL_POINTER = 1,
  ELL_STATUS_INVALID_UTF8 = 2,
  ELL_STATUS_MALFORMED = 3,
  ELL_STATUS_RESOURCE_LIMIT = 4,
  ELL_STATUS_AMBIGUOUS = 5,
  ELL_STATUS_INTERNAL = 6,
} EllStatus;

/**
 * Opaque graph handle.
 */
typedef struct EllGraph EllGraph;

/**
 * Opaque reduction instance handle.
 */
typedef struct EllInstance EllInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *ell_version(void);

/**
 * Message for the last failed call on this thread, or NULL after a
 * successful one. Valid until the next call on the same thread.
 */
const char *ell_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ell_string_free(char *s);

/**
 * Graph on `n` nodes from `edge_count` pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` values (or may be NULL when
 * `edge_count` is 0); `out` must be writable.
 */
enum EllStatus ell_graph_new(size_t n,
                             const size_t *edges,
                             size_t edge_count,
                             struct EllGraph **out);

/**
 * Graph from `{"n": .., "edges": [[u, v], ..]}`.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum EllStatus ell_graph_from_json(const char *json, struct EllGraph **out);

/**
 * # Safety
 * `g` must be a live handle or NULL.
 */
size_t ell_graph_node_count(const struct EllGraph *g);

/**
 * # Safety
 * `g` must be a live handle or NULL.
 */
size_t ell_graph_edge_count(const struct EllGraph *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum EllStatus ell_graph_to_json(const struct EllGraph *g, char **out);

/**
 * # Safety
 * `g` must come from this library and not be freed twice. NULL is ignored.
 */
void ell_graph_free(struct EllGraph *g);

/**
 * Builds a reduction instance. `kind` is a command name such as
 * `"partition-gd2"` or a kind tag such as `"PARTITION_GD2"`; `source` is
 * the JSON source document the `reduce` command reads.
 *
 * # Safety
 * Both strings must be NUL-terminated; `out` must be writable.
 */
enum EllStatus ell_reduce(const char *kind, const char *source, struct EllInstance **out);

/**
 * Instance from its JSON document, as printed by `reduce`.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum EllStatus ell_instance_from_json(const char *json, struct EllInstance **out);

/**
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum EllStatus ell_instance_to_json(const struct EllInstance *inst, char **out);

/**
 * Copy of the produced graph, owned by the caller.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum EllStatus ell_instance_graph(const struct EllInstance *inst, struct EllGraph **out);

/**
 * Runs the instance's decider against its oracle; `*agree` receives 1
 * when they agree and the side conditions hold, else 0. `budget` caps the
 * search, 0 for the default.
 *
 * # Safety
 * `inst` must be a live handle; `agree` must be writable.
 */
enum EllStatus ell_instance_verify(const struct EllInstance *inst, uint64_t budget, int32_t *agree);

/**
 * # Safety
 * `inst` must come from this library and not be freed twice. NULL is
 * ignored.
 */
void ell_instance_free(struct EllInstance *inst);

/**
 * Runs one command exactly as the command-line tool does. `argv` holds
 * `argc` arguments after the program name; `input` stands in for standard
 * input (NULL for none). The exit code goes to `*exit_code`, the report to
 * `*out_stdout` and diagnostics to `*out_stderr`; either output pointer may
 * be NULL to discard that stream.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; `exit_code` must be
 * writable.
 */
enum EllStatus ell_run(size_t argc,
                       const char *const *argv,
                       const char *input,
                       int32_t *exit_code,
                       char **out_stdout,
                       char **out_stderr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELLIPTOPE_H */
