#ifndef WORKBENCH_H
#define WORKBENCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WbStatus {
  WB_STATUS_OK = 0,
  // A required pointer argument was null.
  WB_STATUS_NULL_ARGUMENT = 1,
  // An input string was not valid UTF-8.
  WB_STATUS_INVALID_UTF8 = 2,
  // An input could not be parsed.
  WB_STATUS_PARSE_ERROR = 3,
  // Inputs parsed but are outside the operation's domain.
  WB_STATUS_INVALID_ARGUMENT = 4,
  // A caller-provided buffer is too small; the needed length was written.
  WB_STATUS_BUFFER_TOO_SMALL = 5,
  // An internal error was caught at the boundary.
  WB_STATUS_PANIC = 6,
} WbStatus;

// Opaque handle to a parsed category.
typedef struct WbCategory WbCategory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *wb_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void wb_string_free(char *s);

// Library version as a static string.
const char *wb_version(void);

// Reduced and fundamental tuples of a label tuple such as `(L0,L0,L1)`.
//
// # Safety
// `tuple` must be a NUL-terminated string; the out-pointers must be valid.
enum WbStatus wb_reduce_tuple(const char *tuple, char **out_reduced, char **out_fundamental);

// Parses a category file into a new handle.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum WbStatus wb_category_parse(const char *text, struct WbCategory **out);

// Releases a category handle. Null is ignored.
//
// # Safety
// `cat` must come from `wb_category_parse` and not have been freed.
void wb_category_free(struct WbCategory *cat);

// Canonical text of a category.
//
// # Safety
// `cat` must be a live handle and `out` a valid pointer.
enum WbStatus wb_category_serialize(const struct WbCategory *cat, char **out);

// Number of hom generators.
//
// # Safety
// `cat` must be a live handle and `out` a valid pointer.
enum WbStatus wb_category_generator_count(const struct WbCategory *cat, size_t *out);

// Number of composable tuples of length `1..=max_d` on which the A∞
// relation fails.
//
// # Safety
// `cat` must be a live handle and `out_failures` a valid pointer.
enum WbStatus wb_category_check_ainf(const struct WbCategory *cat,
                                     size_t max_d,
                                     size_t *out_failures);

// Writes 1 to `out` when every discrepancy vanishes and declared unit
// levels are non-positive, 0 otherwise.
//
// # Safety
// `cat` must be a live handle and `out` a valid pointer.
enum WbStatus wb_category_is_filtered(const struct WbCategory *cat, int *out);

// f-vector of the cluster strata for `d` inputs and distinct labels,
// indexed by dimension. Writes the length to `out_len`; when `cap` is too
// small nothing else is written and `WB_STATUS_BUFFER_TOO_SMALL` is
// returned.
//
// # Safety
// `buf` must hold `cap` elements (may be null when `cap` is 0) and
// `out_len` must be valid.
enum WbStatus wb_cluster_f_vector(size_t d, size_t *buf, size_t cap, size_t *out_len);

// Worst-case vertex curvature as an exact rational string. `closed`
// selects `L_0 = L_d`; `draft` selects the alternative closed count.
//
// # Safety
// `epsilon` must be a NUL-terminated string and `out` a valid pointer.
enum WbStatus wb_vertex_curvature_budget(const char *epsilon,
                                         size_t d,
                                         int closed,
                                         int draft,
                                         char **out);

// Worst case and interior cap of the (ε, δ) budget as rational strings.
//
// # Safety
// Inputs must be NUL-terminated strings; the out-pointers must be valid.
enum WbStatus wb_eps_delta_budget(const char *epsilon,
                                  const char *delta,
                                  char **out_worst,
                                  char **out_cap);

// Dimension for the size-only cases (`strip_moduli`, `stacked`,
// `sphere_cluster`) from `d`, or `marked_disc` with `l = d` and `k`.
//
// # Safety
// `case_name` must be a NUL-terminated string and `out` a valid pointer.
enum WbStatus wb_moduli_dimension(const char *case_name, int64_t d, int64_t k, int64_t *out);

// Intrinsic widths of a gluing expression, printed as `(w1,...,wd)`.
//
// # Safety
// `expr` must be a NUL-terminated string and `out` a valid pointer.
enum WbStatus wb_intrinsic_width(const char *expr, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WORKBENCH_H */
