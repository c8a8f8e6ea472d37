#ifndef PENTALAB_H
#define PENTALAB_H

/* Generated by cbindgen from crates/pentalab-ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Outcome of every call.
 */
typedef enum PlStatus {
  PL_STATUS_OK = 0,
  PL_STATUS_NULL_POINTER = 1,
  PL_STATUS_INVALID_INPUT = 2,
  PL_STATUS_DEGENERATE = 3,
  PL_STATUS_MAP_SINGULARITY = 4,
  PL_STATUS_UNSUPPORTED = 5,
  PL_STATUS_PANIC = 6,
} PlStatus;

/*
 Opaque handle to the `2n` coordinates of a twisted polygon.
 */
typedef struct PlCoords PlCoords;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread. The pointer stays valid
 until the next failing call on the same thread.
 */
const char *pl_last_error(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and must not be used afterwards.
 */
void pl_string_free(char *s);

/*
 Builds coordinates from `2n` rational strings.

 # Safety
 `entries` must point to `count` valid C strings; `out` must be writable.
 */
enum PlStatus pl_coords_new(const char *const *entries, size_t count, struct PlCoords **out);

/*
 Releases a coordinate handle. Null is ignored.

 # Safety
 `c` must come from this library and must not be used afterwards.
 */
void pl_coords_free(struct PlCoords *c);

/*
 The period `n`; the handle holds `2n` coordinates. Zero for null.

 # Safety
 `c` must be null or a live handle.
 */
size_t pl_coords_n(const struct PlCoords *c);

/*
 Coordinate `x_index` for `index` in `1..=2n`.

 # Safety
 `c` must be a live handle; `out` must be writable.
 */
enum PlStatus pl_coords_get(const struct PlCoords *c, size_t index, char **out);

/*
 The coordinates as a JSON document `{"n": …, "x": […]}`.

 # Safety
 `c` must be a live handle; `out` must be writable.
 */
enum PlStatus pl_coords_to_json(const struct PlCoords *c, char **out);

/*
 Applies the involution `α₁` (`which = 1`) or `α₂` (`which = 2`).

 # Safety
 `c` must be a live handle; `out` must be writable.
 */
enum PlStatus pl_coords_alpha(const struct PlCoords *c, uint32_t which, struct PlCoords **out);

/*
 `O_k` (`parity_code = 1`) or `E_k` (`parity_code = 2`), for `k ≤ n/2` or `k = n`.

 # Safety
 `c` must be a live handle; `out` must be writable.
 */
enum PlStatus pl_coords_invariant(const struct PlCoords *c,
                                  size_t k,
                                  uint32_t parity_code,
                                  char **out);

/*
 The monodromy invariants `Ω₁, Ω₂` computed from the coordinates.

 # Safety
 `c` must be a live handle; both outputs must be writable.
 */
enum PlStatus pl_coords_omega(const struct PlCoords *c, char **omega1, char **omega2);

/*
 Determinant of a square matrix given as `{"matrix": [[…]]}`, by
 condensation. A vanishing interior entry is handled by mixing the matrix
 with random unit-triangular factors drawn from `seed`.

 # Safety
 `matrix_json` must be a valid C string; `out` must be writable.
 */
enum PlStatus pl_dodgson_det(const char *matrix_json, uint64_t seed, char **out);

/*
 Determinant by fraction-free elimination, as a reference.

 # Safety
 `matrix_json` must be a valid C string; `out` must be writable.
 */
enum PlStatus pl_bareiss_det(const char *matrix_json, char **out);

/*
 `λ_v` for odd `n ≥ 5` and `1 ≤ v ≤ (n-3)/2`.

 # Safety
 `re` and `im` must be writable.
 */
enum PlStatus pl_lambda(size_t n, size_t v, double *re, double *im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PENTALAB_H */
