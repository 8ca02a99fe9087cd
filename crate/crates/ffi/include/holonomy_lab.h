#ifndef HOLONOMY_LAB_H
#define HOLONOMY_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HlStatus {
  HL_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HL_ERR_NULL = 1,
  /**
   * An argument was out of range (zero vector, non-positive rate, ...).
   */
  HL_ERR_INVALID_INPUT = 2,
  /**
   * The computation could not be completed (unresolved endpoint, step too large, ...).
   */
  HL_ERR_NUMERICAL = 3,
  /**
   * Internal panic caught at the boundary.
   */
  HL_ERR_INTERNAL = 4,
} HlStatus;

typedef enum HlPermutation {
  HL_IDENTITY = 0,
  HL_SWAP = 1,
} HlPermutation;

/**
 * Opaque sampled director path.
 */
typedef struct HlDirectorPath HlDirectorPath;

/**
 * Opaque holonomy classification result.
 */
typedef struct HlHolonomy HlHolonomy;

/**
 * Opaque parametric model.
 */
typedef struct HlModel HlModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread; empty if none.
 */
const char *hl_last_error_message(void);

/**
 * Exact crossing model.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle to.
 */
enum HlStatus hl_model_crossing(struct HlModel **out);

/**
 * Avoided crossing with minimum gap `epsilon`.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle to.
 */
enum HlStatus hl_model_perturbed(double epsilon, struct HlModel **out);

/**
 * Kicked Floquet map with the default free evolution and kick.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle to.
 */
enum HlStatus hl_model_floquet(struct HlModel **out);

/**
 * # Safety
 * `model` must be null or a handle from an `hl_model_*` constructor that has
 * not been freed.
 */
void hl_model_free(struct HlModel *model);

/**
 * Energies (or quasienergies) at `lambda`, upper level first.
 *
 * # Safety
 * `model` must be a live handle; `e1` and `e2` must be writable.
 */
enum HlStatus hl_model_levels(const struct HlModel *model, double lambda, double *e1, double *e2);

/**
 * Samples the eigen-director of `model` at `n` evenly spaced parameter values
 * from `start` to `end`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum HlStatus hl_model_director_path(const struct HlModel *model,
                                     double start,
                                     double end,
                                     size_t n,
                                     struct HlDirectorPath **out);

/**
 * Builds a director path from `n` points (`xyz`, `3n` doubles, normalized on
 * entry) and their parameters (`params`, `n` doubles).
 *
 * # Safety
 * `xyz` must point to `3 * n` doubles and `params` to `n` doubles.
 */
enum HlStatus hl_path_from_points(const double *xyz,
                                  const double *params,
                                  size_t n,
                                  struct HlDirectorPath **out);

/**
 * Closed loop of angular radius `radius` through `base` (3 doubles).
 *
 * # Safety
 * `base` must point to 3 doubles; `out` must be writable.
 */
enum HlStatus hl_path_small_loop(const double *base,
                                 double radius,
                                 size_t n,
                                 struct HlDirectorPath **out);

/**
 * Number of samples, or 0 for a null handle.
 *
 * # Safety
 * `path` must be null or a live handle.
 */
size_t hl_path_len(const struct HlDirectorPath *path);

/**
 * Copies the canonical representative of sample `index` into `xyz` (3 doubles).
 *
 * # Safety
 * `path` must be a live handle; `xyz` must have room for 3 doubles.
 */
enum HlStatus hl_path_sample(const struct HlDirectorPath *path, size_t index, double *xyz);

/**
 * # Safety
 * `path` must be null or a live handle.
 */
void hl_path_free(struct HlDirectorPath *path);

/**
 * Lifts `path` from `a0` (3 doubles, or null for the canonical
 * representative of the first sample) and classifies the loop.
 *
 * # Safety
 * `path` must be a live handle; `a0` null or 3 doubles; `out` writable.
 */
enum HlStatus hl_holonomy(const struct HlDirectorPath *path,
                          const double *a0,
                          struct HlHolonomy **out);

/**
 * # Safety
 * `result` must be a live handle; `out` writable.
 */
enum HlStatus hl_holonomy_permutation(const struct HlHolonomy *result, enum HlPermutation *out);

/**
 * Distance from the lifted endpoint to `±a0`.
 *
 * # Safety
 * `result` must be a live handle; `out` writable.
 */
enum HlStatus hl_holonomy_endpoint_defect(const struct HlHolonomy *result, double *out);

/**
 * # Safety
 * `result` must be null or a live handle.
 */
void hl_holonomy_free(struct HlHolonomy *result);

/**
 * Landau-Zener transition estimate for gap `epsilon` crossed at `dλ/dt = rate`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HlStatus hl_landau_zener(double epsilon, double rate, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLONOMY_LAB_H */
