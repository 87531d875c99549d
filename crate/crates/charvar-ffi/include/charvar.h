#ifndef CHARVAR_H
#define CHARVAR_H

/* Generated by cbindgen from the charvar-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every FFI entry point.
typedef enum CharvarStatus {
  CHARVAR_STATUS_OK = 0,
  CHARVAR_STATUS_INVALID_INPUT = 1,
  CHARVAR_STATUS_INTERNAL_ERROR = 2,
  CHARVAR_STATUS_NULL_ARGUMENT = 3,
  CHARVAR_STATUS_PANIC = 4,
} CharvarStatus;

// Opaque census handle.
typedef struct CharvarCensus CharvarCensus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Runs the full splice census.
//
// `left_pq` and `right_pq` are flat arrays of torus-knot pairs
// p1,q1,p2,q2,…; `matrix` is the gluing matrix a,b,c,d acting by
// μ ↦ μ^a λ^b, λ ↦ μ^c λ^d. On success `*out` owns the census.
//
// # Safety
// The array pointers must be valid for the stated lengths and `out`
// must be a valid pointer to writable storage.
enum CharvarStatus charvar_census_run(const int32_t *left_pq,
                                      size_t left_pairs,
                                      const int32_t *right_pq,
                                      size_t right_pairs,
                                      const int32_t *matrix,
                                      struct CharvarCensus **out);

// Serializes a census to its JSON report.
//
// # Safety
// `census` must be a live handle from [`charvar_census_run`]; `out`
// must be writable. The returned string is released with
// [`charvar_string_free`].
enum CharvarStatus charvar_census_json(const struct CharvarCensus *census, char **out);

// Number of isolated components with the given Zariski tangent
// dimension (the trivial character excluded).
//
// # Safety
// `census` must be a live handle; `out` must be writable.
enum CharvarStatus charvar_census_isolated_count(const struct CharvarCensus *census,
                                                 size_t zariski_dim,
                                                 size_t *out);

// Number of circle components.
//
// # Safety
// `census` must be a live handle; `out` must be writable.
enum CharvarStatus charvar_census_circle_count(const struct CharvarCensus *census, size_t *out);

// Number of components whose local structure is not a manifold.
//
// # Safety
// `census` must be a live handle; `out` must be writable.
enum CharvarStatus charvar_census_non_manifold_count(const struct CharvarCensus *census,
                                                     size_t *out);

// Releases a census handle.
//
// # Safety
// `census` must be null or a handle from [`charvar_census_run`] not yet
// freed.
void charvar_census_free(struct CharvarCensus *census);

// JSON report of the strata of the (p, q) torus-knot exterior.
//
// # Safety
// `out` must be writable; release the string with
// [`charvar_string_free`].
enum CharvarStatus charvar_arcs_json(int32_t p, int32_t q, char **out);

// Runs the verification suite; `*out_failed` receives the number of
// failed criteria (0 on full success).
//
// # Safety
// `out_failed` must be writable.
enum CharvarStatus charvar_verify(bool homology_only, size_t *out_failed);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a string returned by this library not yet freed.
void charvar_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHARVAR_H */
