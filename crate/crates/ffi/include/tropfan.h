#ifndef TROPFAN_H
#define TROPFAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TropfanStatus {
  TROPFAN_STATUS_OK = 0,
  TROPFAN_STATUS_NULL_POINTER = 1,
  TROPFAN_STATUS_INVALID_UTF8 = 2,
  TROPFAN_STATUS_PARSE = 3,
  TROPFAN_STATUS_INVALID_ARGUMENT = 4,
  TROPFAN_STATUS_DIMENSION = 5,
  TROPFAN_STATUS_INVALID_SPLIT = 6,
  TROPFAN_STATUS_UNBALANCED = 7,
  TROPFAN_STATUS_NON_INTEGRAL = 8,
  TROPFAN_STATUS_INVALID_DEGREE = 9,
  TROPFAN_STATUS_REFINEMENT_REQUIRED = 10,
  TROPFAN_STATUS_NO_CLOSED_FORM = 11,
  TROPFAN_STATUS_OVERFLOW = 12,
  TROPFAN_STATUS_PANIC = 13,
} TropfanStatus;

/**
 * A weighted cycle on M_{0,n}.
 */
typedef struct TropfanCycle TropfanCycle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on this thread.
 */
const char *tropfan_last_error(void);

/**
 * Parses a cycle spec such as `psi:1+psi:2` on M_{0,n}.
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` a valid pointer.
 */
enum TropfanStatus tropfan_cycle_parse(size_t n, const char *spec, struct TropfanCycle **out);

/**
 * The codimension-`codim` skeleton of M_{0,n} with weight one.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TropfanStatus tropfan_cycle_skeleton(size_t n, size_t codim, struct TropfanCycle **out);

/**
 * Releases a cycle. Null is ignored.
 *
 * # Safety
 * `cycle` must come from this library and not be used afterwards.
 */
void tropfan_cycle_free(struct TropfanCycle *cycle);

/**
 * # Safety
 * `cycle` must be a live handle and `out` a valid pointer.
 */
enum TropfanStatus tropfan_cycle_cone_count(const struct TropfanCycle *cycle, size_t *out);

/**
 * # Safety
 * `cycle` must be a live handle and `out` a valid pointer.
 */
enum TropfanStatus tropfan_cycle_dim(const struct TropfanCycle *cycle, size_t *out);

/**
 * # Safety
 * `cycle` must be a live handle and `out` a valid pointer.
 */
enum TropfanStatus tropfan_cycle_is_balanced(const struct TropfanCycle *cycle, bool *out);

/**
 * Writes the cycle as JSON `{"n","dim","cones":[{"splits","weight"}]}`.
 *
 * # Safety
 * `cycle` must be a live handle and `out` a valid pointer. The string must
 * be released with `tropfan_string_free`.
 */
enum TropfanStatus tropfan_cycle_to_json(const struct TropfanCycle *cycle, char **out);

/**
 * Whether the cycle is irreducible, and the dimension of its weight space.
 *
 * # Safety
 * `cycle` must be a live handle; the output pointers must be valid.
 */
enum TropfanStatus tropfan_cycle_irreducible(const struct TropfanCycle *cycle,
                                             bool *global,
                                             size_t *weight_space_dim);

/**
 * Multiplicity of a codimension-one type of plane curves with `m - 1`
 * contracted markings. `closed` receives the closed-form value when the type
 * has one (`has_closed` tells which).
 *
 * # Safety
 * `degree` and `ctype` must be nul-terminated strings; the output pointers
 * must be valid.
 */
enum TropfanStatus tropfan_mult(const char *degree,
                                const char *ctype,
                                int64_t *direct,
                                int64_t *closed,
                                bool *has_closed);

/**
 * The image cells of the special-position cycle as a JSON array of
 * `{"rays","weight"}`. `version` is `"v1"` or `"v2"`.
 *
 * # Safety
 * `degree` and `version` must be nul-terminated strings and `out` a valid
 * pointer. The string must be released with `tropfan_string_free`.
 */
enum TropfanStatus tropfan_special_position_json(const char *degree,
                                                 const char *version,
                                                 char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void tropfan_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPFAN_H */
