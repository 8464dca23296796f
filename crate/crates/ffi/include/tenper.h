/* C interface to the tenper exact tensor-permanent library. */

#ifndef TENPER_H
#define TENPER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum {
  /**
   * Success.
   */
  TpStatus_Ok = 0,
  /**
   * Domain error: bad shape, level out of range, precondition violated.
   */
  TpStatus_Domain = 1,
  /**
   * A resource guard stopped the computation.
   */
  TpStatus_Resource = 2,
  /**
   * Malformed input text.
   */
  TpStatus_Parse = 3,
  /**
   * A required pointer argument was null.
   */
  TpStatus_NullArgument = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  TpStatus_Utf8 = 5,
} TpStatus;

typedef struct TpTensor TpTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Detail text of the most recent failure on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread; do
 * not free it.
 */
const char *tp_last_error_message(void);

/**
 * Parses hypermatrix text (.ht format) into a tensor handle.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out` to writable
 * pointer storage.
 */
TpStatus tp_tensor_parse(const char *text, TpTensor **out);

/**
 * Identity tensor of dimension `n` and order `d`.
 *
 * # Safety
 * `out` must point to writable pointer storage.
 */
TpStatus tp_tensor_identity(uintptr_t n, uintptr_t d, TpTensor **out);

/**
 * All-ones tensor of dimension `n` and order `d`.
 *
 * # Safety
 * `out` must point to writable pointer storage.
 */
TpStatus tp_tensor_ones(uintptr_t n, uintptr_t d, TpTensor **out);

/**
 * Builds a named builtin tensor ("C" or "D").
 *
 * # Safety
 * `name` must be NUL-terminated; `out` must be writable.
 */
TpStatus tp_tensor_builtin(const char *name, TpTensor **out);

/**
 * Releases a tensor handle; null is ignored.
 *
 * # Safety
 * `t` must have come from this library and not be freed twice.
 */
void tp_tensor_free(TpTensor *t);

/**
 * Releases a string produced by this library; null is ignored.
 *
 * # Safety
 * `s` must have come from this library and not be freed twice.
 */
void tp_string_free(char *s);

/**
 * Order (number of indices) of the tensor; 0 for a null handle.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
uintptr_t tp_tensor_order(const TpTensor *t);

/**
 * Extent along a 1-based axis; 0 for a null handle or bad axis.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
uintptr_t tp_tensor_dim(const TpTensor *t, uintptr_t axis);

/**
 * Serializes the tensor back into .ht text.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
TpStatus tp_tensor_to_text(const TpTensor *t, char **out);

/**
 * k-permanent as an exact rational string ("36", "-5/2"). k = 1 is the
 * injection-sum permanent; higher k need a cubical tensor.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
TpStatus tp_per(const TpTensor *t, uintptr_t k, char **out);

/**
 * The modified permanent anchored at the first minimum-extent axis.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
TpStatus tp_per_min(const TpTensor *t, char **out);

/**
 * Combinatorial hyperdeterminant as an exact rational string.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
TpStatus tp_hyperdet(const TpTensor *t, char **out);

/**
 * Whether every k-plane of the tensor sums to exactly 1.
 *
 * # Safety
 * `t` must be a live handle; `out` must point to writable bool storage.
 */
TpStatus tp_is_k_stochastic(const TpTensor *t, uintptr_t k, bool *out);

/**
 * Number of Latin squares of order `n` (guarded at n <= 5).
 *
 * # Safety
 * `out` must point to writable u64 storage.
 */
TpStatus tp_latin_count(uintptr_t n, uint64_t *out);

/**
 * Number of k-per index patterns of order-d dimension-n tensors.
 *
 * # Safety
 * `out` must point to writable u64 storage.
 */
TpStatus tp_pattern_count(uintptr_t d, uintptr_t n, uintptr_t k, uint64_t *out);

/**
 * Exact vertex counts of a stochastic-tensor polytope. `kind` is "line" or
 * "plane"; `d` is 2 (doubly stochastic baseline, line only) or 3.
 *
 * # Safety
 * `kind` must be NUL-terminated; `total` and `zero_one` must be writable.
 */
TpStatus tp_vertex_counts(const char *kind,
                          uintptr_t n,
                          uintptr_t d,
                          uint64_t *total,
                          uint64_t *zero_one);

/**
 * Minimum 1-permanent over seeded random convex combinations of
 * line-permutation tensors, as an exact rational string.
 *
 * # Safety
 * `out` must be writable.
 */
TpStatus tp_probe_min_per(uintptr_t d, uintptr_t n, uintptr_t samples, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TENPER_H */
