#ifndef CVDMAP_H
#define CVDMAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define CVDMAP_DEUTERANOMALY 0

#define CVDMAP_PROTANOMALY 1

#define CVDMAP_TRITANOMALY 2

#define CVDMAP_METHOD_FIT_ORIGINAL 0

#define CVDMAP_METHOD_MAX_RANGE 1

// Size in bytes of a binary LUT.
#define CVDMAP_LUT_LEN 768

typedef enum CvdmapStatus {
  CVDMAP_STATUS_OK = 0,
  CVDMAP_STATUS_NULL_POINTER = 1,
  CVDMAP_STATUS_INVALID_ARGUMENT = 2,
  // The inverse appearance model had no solution.
  CVDMAP_STATUS_MATH = 3,
  CVDMAP_STATUS_DEGENERATE = 4,
  // No displayable line or lightness exists; try the fit-original method.
  CVDMAP_STATUS_INFEASIBLE = 5,
  CVDMAP_STATUS_PARSE = 6,
  CVDMAP_STATUS_UNKNOWN_NAME = 7,
  CVDMAP_STATUS_IO = 8,
  // A Rust panic was caught at the boundary.
  CVDMAP_STATUS_PANIC = 9,
} CvdmapStatus;

// Opaque colormap handle.
typedef struct CvdmapColormap CvdmapColormap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a
// success. Valid until the next cvdmap call on the same thread.
const char *cvdmap_last_error_message(void);

// Looks up a built-in map ("viridis", "jet", "grayscale-jp", "cividis").
//
// # Safety
// `name` must be a NUL-terminated string and `out` a writable pointer.
enum CvdmapStatus cvdmap_builtin(const char *name, struct CvdmapColormap **out);

// Loads a table or LUT file, falling back to the built-in registry.
//
// # Safety
// `path_or_name` must be a NUL-terminated string and `out` a writable pointer.
enum CvdmapStatus cvdmap_load_colormap(const char *path_or_name, struct CvdmapColormap **out);

// Builds a map from `n` interleaved sRGB triples in [0, 1].
//
// # Safety
// `rgb` must point to `3 * n` doubles and `out` must be writable.
enum CvdmapStatus cvdmap_colormap_from_rgb(const double *rgb,
                                           size_t n,
                                           struct CvdmapColormap **out);

// Number of entries, or 0 for a null handle.
//
// # Safety
// `map` must be null or a live handle.
size_t cvdmap_colormap_len(const struct CvdmapColormap *map);

// # Safety
// `map` must be a live handle and `rgb_out` must hold 3 doubles.
enum CvdmapStatus cvdmap_colormap_get(const struct CvdmapColormap *map,
                                      size_t index,
                                      double *rgb_out);

// Releases a handle. Null is ignored.
//
// # Safety
// `map` must be null or a handle not yet freed.
void cvdmap_colormap_free(struct CvdmapColormap *map);

// Optimizes `map` for the given deficiency under default viewing
// conditions, producing `n_out` entries.
//
// # Safety
// `map` must be a live handle and `out` a writable pointer.
enum CvdmapStatus cvdmap_optimize(const struct CvdmapColormap *map,
                                  uint32_t cvd_type,
                                  double severity,
                                  uint32_t method,
                                  size_t n_out,
                                  struct CvdmapColormap **out);

// Simulates one sRGB color as seen with the given deficiency.
//
// # Safety
// `rgb_in` and `rgb_out` must each hold 3 doubles.
enum CvdmapStatus cvdmap_simulate(const double *rgb_in,
                                  uint32_t cvd_type,
                                  double severity,
                                  double *rgb_out);

// sRGB to J'a'b' under default viewing conditions.
//
// # Safety
// `rgb` and `jab_out` must each hold 3 doubles.
enum CvdmapStatus cvdmap_srgb_to_jab(const double *rgb, double *jab_out);

// J'a'b' to unclamped sRGB under default viewing conditions.
//
// # Safety
// `jab` and `rgb_out` must each hold 3 doubles.
enum CvdmapStatus cvdmap_jab_to_srgb(const double *jab, double *rgb_out);

// Writes the `len - 1` consecutive J'a'b' distances of `map`.
//
// # Safety
// `map` must be a live handle and `out` must hold `capacity` doubles.
enum CvdmapStatus cvdmap_perceptual_deltas(const struct CvdmapColormap *map,
                                           double *out,
                                           size_t capacity);

// Writes the 768-byte binary LUT (256 reds, 256 greens, 256 blues).
//
// # Safety
// `map` must be a live handle and `out` must hold `capacity` bytes.
enum CvdmapStatus cvdmap_lut_bytes(const struct CvdmapColormap *map, uint8_t *out, size_t capacity);

// Fraction of lattice colors that stay distinct after simulation.
//
// # Safety
// `out` must be a writable pointer.
enum CvdmapStatus cvdmap_gamut_fraction(uint32_t cvd_type,
                                        double severity,
                                        size_t resolution,
                                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CVDMAP_H */
