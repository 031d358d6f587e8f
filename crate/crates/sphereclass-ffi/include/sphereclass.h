#ifndef SPHERECLASS_H
#define SPHERECLASS_H

/* Generated by cbindgen from crates/sphereclass-ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Manifold family selector for [`sc_class_parse`].
 */
typedef enum {
  SC_KIND_RATIONAL = 0,
  SC_KIND_RULED = 1,
} ScKind;

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  SC_STATUS_OK = 0,
  SC_STATUS_NULL_POINTER = 1,
  SC_STATUS_INVALID_UTF8 = 2,
  SC_STATUS_PARSE = 3,
  SC_STATUS_MISMATCH = 4,
  SC_STATUS_OVERFLOW = 5,
  SC_STATUS_INTERNAL = 6,
} ScStatus;

/**
 * Opaque class handle bound to its manifold.
 */
typedef struct ScClass ScClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sc_version(void);

/**
 * Copies the last error message of this thread, or returns null if none.
 *
 * # Safety
 * The returned string must be released with [`sc_string_free`].
 */
char *sc_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void sc_string_free(char *s);

/**
 * Parses `literal` on `CP^2 # k` (`kind` = `SC_KIND_RATIONAL`) or on the
 * genus-`h` ruled manifold blown up `k` times (`kind` = `SC_KIND_RULED`).
 *
 * # Safety
 * `literal` must be a valid NUL-terminated string and `out` a valid pointer.
 * The handle written to `out` must be released with [`sc_class_free`].
 */
ScStatus sc_class_parse(uint32_t kind, uint32_t h, size_t k, const char *literal, ScClass **out);

/**
 * Releases a class handle. Null is ignored.
 *
 * # Safety
 * `c` must come from [`sc_class_parse`] and must not be used afterwards.
 */
void sc_class_free(ScClass *c);

/**
 * Self-intersection of `c`.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
ScStatus sc_class_square(const ScClass *c, int64_t *out);

/**
 * Intersection number of two classes on the same manifold.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
ScStatus sc_class_pair(const ScClass *a, const ScClass *b, int64_t *out);

/**
 * Term-form literal of `c`.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer; free the result with
 * [`sc_string_free`].
 */
ScStatus sc_class_format(const ScClass *c, char **out);

/**
 * Reduction result and move log as JSON.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer; free the result with
 * [`sc_string_free`].
 */
ScStatus sc_reduce_json(const ScClass *c, char **out);

/**
 * Full classification report as JSON. `omega` may be null; when given it is
 * a cohomology literal on the same manifold.
 *
 * # Safety
 * `c` must be a live handle, `omega` null or a valid NUL-terminated string,
 * and `out` a valid pointer; free the result with [`sc_string_free`].
 */
ScStatus sc_classify_json(const ScClass *c, const char *omega, char **out);

/**
 * Whether two rational classes lie in the same orbit.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
ScStatus sc_equivalent(const ScClass *a, const ScClass *b, bool *out);

/**
 * Runs the command-line front end. `args_json` is a JSON array of argument
 * strings without the program name. Standard output is written to `out` and
 * the process exit code to `code`. Usage errors still return `SC_STATUS_OK`
 * with exit code 2; their message is then available from [`sc_last_error`].
 *
 * # Safety
 * `args_json` must be a valid NUL-terminated string and `out`, `code` valid
 * pointers; free `*out` with [`sc_string_free`].
 */
ScStatus sc_cli_run(const char *args_json, char **out, int32_t *code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHERECLASS_H */
