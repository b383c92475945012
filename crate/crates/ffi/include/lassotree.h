#ifndef LASSOTREE_H
#define LASSOTREE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LtBuildKind {
  LT_BUILD_KIND_EQUIDISTANT = 0,
  LT_BUILD_KIND_WEAK = 1,
  LT_BUILD_KIND_TOPOLOGICAL = 2,
  LT_BUILD_KIND_CIRCULAR = 3,
} LtBuildKind;

/**
 * Result code of every fallible call.
 */
typedef enum LtStatus {
  LT_STATUS_OK = 0,
  LT_STATUS_NULL_POINTER = 1,
  LT_STATUS_INVALID_UTF8 = 2,
  LT_STATUS_PARSE_ERROR = 3,
  LT_STATUS_INVALID_INPUT = 4,
  LT_STATUS_TOO_LARGE = 5,
  LT_STATUS_PANIC = 6,
} LtStatus;

/**
 * Opaque cord-set handle.
 */
typedef struct LtCords LtCords;

/**
 * Opaque X-tree handle.
 */
typedef struct LtTree LtTree;

/**
 * Lasso flags for one tree and cord set.
 */
typedef struct LtReport {
  bool equidistant;
  bool weak;
  bool topological;
  bool strong;
} LtReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty after a
 * successful call. Valid until the next call into the library.
 */
const char *lt_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lt_version(void);

/**
 * Parses a Newick string; edge weights, if present, are ignored.
 *
 * # Safety
 * `newick` must be a NUL-terminated string and `out` a writable pointer.
 */
enum LtStatus lt_tree_parse(const char *newick, struct LtTree **out);

/**
 * # Safety
 * `tree` must come from [`lt_tree_parse`] and not be used afterwards.
 */
void lt_tree_free(struct LtTree *tree);

/**
 * # Safety
 * `tree` must be a live handle and `out` writable.
 */
enum LtStatus lt_tree_leaf_count(const struct LtTree *tree, size_t *out);

/**
 * Canonical Newick form; release with [`lt_string_free`].
 *
 * # Safety
 * `tree` must be a live handle and `out` writable.
 */
enum LtStatus lt_tree_to_newick(const struct LtTree *tree, char **out);

/**
 * Parses a cord file (`a b` per line, `#` comments) against the leaves of
 * `tree`.
 *
 * # Safety
 * `tree` must be a live handle, `text` NUL-terminated, `out` writable.
 */
enum LtStatus lt_cords_parse(const struct LtTree *tree, const char *text, struct LtCords **out);

/**
 * # Safety
 * `cords` must come from this library and not be used afterwards.
 */
void lt_cords_free(struct LtCords *cords);

/**
 * # Safety
 * `cords` must be a live handle and `out` writable.
 */
enum LtStatus lt_cords_len(const struct LtCords *cords, size_t *out);

/**
 * Cord-file text; release with [`lt_string_free`].
 *
 * # Safety
 * `cords` must be a live handle and `out` writable.
 */
enum LtStatus lt_cords_to_text(const struct LtCords *cords, char **out);

/**
 * Lasso flags from the child-edge-graph characterizations.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum LtStatus lt_classify(const struct LtTree *tree,
                          const struct LtCords *cords,
                          struct LtReport *out);

/**
 * Lasso flags from the exhaustive definition-level checks. Returns
 * `TooLarge` above five leaves.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum LtStatus lt_oracle_check(const struct LtTree *tree,
                              const struct LtCords *cords,
                              struct LtReport *out);

/**
 * Builds a cord set of the requested kind for `tree`.
 *
 * # Safety
 * `tree` must be a live handle and `out` writable.
 */
enum LtStatus lt_build(const struct LtTree *tree, enum LtBuildKind kind, struct LtCords **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void lt_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LASSOTREE_H */
