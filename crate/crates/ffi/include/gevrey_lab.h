#ifndef GEVREY_LAB_H
#define GEVREY_LAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum GvlStatus {
  GVL_STATUS_OK = 0,
  GVL_STATUS_NULL_POINTER = 1,
  GVL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * An exponential weight exceeds what the field's round-off allows.
   */
  GVL_STATUS_UNRELIABLE_WEIGHT = 3,
  /**
   * Blow-up, divergence or another numerical failure.
   */
  GVL_STATUS_NUMERICAL = 4,
  GVL_STATUS_IO = 5,
  /**
   * Malformed or incompatible snapshot.
   */
  GVL_STATUS_FORMAT = 6,
  GVL_STATUS_PANIC = 7,
} GvlStatus;

/**
 * Models understood by [`gvl_march`].
 */
typedef enum GvlModel {
  GVL_MODEL_NAVIER_STOKES = 0,
  GVL_MODEL_BURGERS = 1,
  GVL_MODEL_HEAT = 2,
} GvlModel;

/**
 * Spectral vector field.
 */
typedef struct GvlField GvlField;

/**
 * Periodic box with its wavenumber tables.
 */
typedef struct GvlGrid GvlGrid;

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t gvl_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gvl_version(void);

/**
 * Create an `n³` grid on a box of side `box_length`, keeping modes with
 * `|m_i| ≤ dealias·n/2`.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum GvlStatus gvl_grid_new(size_t n, double box_length, double dealias, struct GvlGrid **out);

/**
 * # Safety
 * `grid` must be null or a handle from [`gvl_grid_new`] not yet freed.
 */
void gvl_grid_free(struct GvlGrid *grid);

/**
 * Number of real samples `3n³` of a field on this grid.
 *
 * # Safety
 * `grid` must be a live grid handle.
 */
size_t gvl_grid_sample_count(const struct GvlGrid *grid);

/**
 * # Safety
 * `field` must be null or a live field handle.
 */
void gvl_field_free(struct GvlField *field);

/**
 * Seeded random field with `|û(k)| ∝ |k|^{-beta}`, mean zero.
 *
 * # Safety
 * `grid` must be a live grid handle and `out` writable.
 */
enum GvlStatus gvl_field_random(const struct GvlGrid *grid,
                                double beta,
                                uint64_t seed,
                                struct GvlField **out);

/**
 * Taylor–Green vortex of the given amplitude.
 *
 * # Safety
 * `grid` must be a live grid handle and `out` writable.
 */
enum GvlStatus gvl_field_taylor_green(const struct GvlGrid *grid,
                                      double amplitude,
                                      struct GvlField **out);

/**
 * The exact Burgers solution at time `t`, periodized onto the grid.
 *
 * # Safety
 * `grid` must be a live grid handle and `out` writable.
 */
enum GvlStatus gvl_field_exact(const struct GvlGrid *grid, double t, struct GvlField **out);

/**
 * Field from `3n³` component-major physical samples.
 *
 * # Safety
 * `samples` must point to `len` readable doubles; `out` writable.
 */
enum GvlStatus gvl_field_from_samples(const struct GvlGrid *grid,
                                      const double *samples,
                                      size_t len,
                                      struct GvlField **out);

/**
 * Write the `3n³` physical samples, component-major, into `buf`.
 *
 * # Safety
 * `buf` must point to `len` writable doubles.
 */
enum GvlStatus gvl_field_samples(const struct GvlField *field, double *buf, size_t len);

/**
 * `‖A^r e^{θA} u‖`. Fails with `UnreliableWeight` when `θ` is too large
 * for the field's resolved spectrum.
 *
 * # Safety
 * `field` must be a live handle, `out` writable.
 */
enum GvlStatus gvl_field_norm(const struct GvlField *field, double r, double theta, double *out);

/**
 * Leray projection onto divergence-free fields, as a new handle.
 *
 * # Safety
 * `field` must be a live handle, `out` writable.
 */
enum GvlStatus gvl_field_leray(const struct GvlField *field, struct GvlField **out);

/**
 * March `field` (taken at `t_start`) to `t_end` with step at most `dt`.
 *
 * # Safety
 * `field` must be a live handle, `out` writable.
 */
enum GvlStatus gvl_march(const struct GvlField *field,
                         enum GvlModel model,
                         double t_start,
                         double t_end,
                         double dt,
                         struct GvlField **out);

/**
 * Tail-slope estimate of the analyticity radius. `reliable` is set to 0
 * when too few modes sit above round-off.
 *
 * # Safety
 * `field` must be a live handle; `radius` and `reliable` writable.
 */
enum GvlStatus gvl_field_radius(const struct GvlField *field, double *radius, int32_t *reliable);

/**
 * Exact analyticity radius of the Burgers example at time `t`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GvlStatus gvl_exact_radius(double t, double *out);

/**
 * `‖A^r e^{λ√t A} u(t)‖²` for the exact example on ℝ³.
 *
 * # Safety
 * `out` must be writable.
 */
enum GvlStatus gvl_exact_norm_sq(double t, double r, double lambda, double *out);

/**
 * Write a binary snapshot; the model is recorded as Navier–Stokes.
 *
 * # Safety
 * `field` must be a live handle and `path` a NUL-terminated string.
 */
enum GvlStatus gvl_snapshot_write(const struct GvlField *field, const char *path);

/**
 * Read a binary snapshot into a new field handle.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum GvlStatus gvl_snapshot_read(const char *path, struct GvlField **out);

/**
 * Simulation time carried by the field.
 *
 * # Safety
 * `field` must be a live handle.
 */
double gvl_field_time(const struct GvlField *field);

#endif  /* GEVREY_LAB_H */
