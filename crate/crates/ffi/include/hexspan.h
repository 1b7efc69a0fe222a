#ifndef HEXSPAN_H
#define HEXSPAN_H

#include <stddef.h>
#include <stdint.h>

// Shape whose homothets define the triangulation.
typedef enum HexspanShape {
  HEXSPAN_SHAPE_HEXAGON = 0,
  HEXSPAN_SHAPE_TRIANGLE = 1,
  HEXSPAN_SHAPE_SQUARE = 2,
} HexspanShape;

// Result of every call.
typedef enum HexspanStatus {
  HEXSPAN_STATUS_OK = 0,
  HEXSPAN_STATUS_NULL_POINTER = 1,
  HEXSPAN_STATUS_INVALID_ARGUMENT = 2,
  HEXSPAN_STATUS_TOO_FEW_POINTS = 3,
  HEXSPAN_STATUS_GENERAL_POSITION = 4,
  HEXSPAN_STATUS_DISCONNECTED = 5,
  HEXSPAN_STATUS_WALK_FAILED = 6,
  HEXSPAN_STATUS_BUFFER_TOO_SMALL = 7,
  HEXSPAN_STATUS_INTERNAL = 8,
} HexspanStatus;

// Opaque triangulation handle.
typedef struct HexspanTriangulation HexspanTriangulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a [`HexspanStatus`] value.
const char *hexspan_status_message(uint32_t status);

// Library version, NUL-terminated.
const char *hexspan_version(void);

// Builds the triangulation of `n` points given as interleaved `x, y` pairs.
// `shape` is a [`HexspanShape`] value.
//
// # Safety
// `xy` must point to `2 * n` readable doubles and `out` to a writable handle
// slot.
enum HexspanStatus hexspan_triangulate(const double *xy,
                                       size_t n,
                                       uint32_t shape,
                                       struct HexspanTriangulation **out);

// Builds the lower-bound family with `k ≥ 1` rungs.
//
// # Safety
// `out` must point to a writable handle slot.
enum HexspanStatus hexspan_lower_bound_family(size_t k, struct HexspanTriangulation **out);

// Closed-form stretch factor of the lower-bound family, or NaN for `k = 0`.
double hexspan_expected_lower_bound_stretch(size_t k);

// Releases a handle. Null is accepted.
//
// # Safety
// `t` must be null or a handle returned by this library and not yet freed.
void hexspan_triangulation_free(struct HexspanTriangulation *t);

// Number of sites.
//
// # Safety
// `t` must be a live handle and `out` writable.
enum HexspanStatus hexspan_point_count(const struct HexspanTriangulation *t, size_t *out);

// Number of triangles.
//
// # Safety
// `t` must be a live handle and `out` writable.
enum HexspanStatus hexspan_triangle_count(const struct HexspanTriangulation *t, size_t *out);

// Copies the counterclockwise vertex triples into `out` (`3 × count`
// entries). `cap` is the number of `size_t` slots available.
//
// # Safety
// `t` must be a live handle and `out` must have `cap` writable slots.
enum HexspanStatus hexspan_triangles(const struct HexspanTriangulation *t, size_t *out, size_t cap);

// Exact stretch factor with its witness pair.
//
// # Safety
// `t` must be a live handle; the out pointers must be writable. `s` and
// `u` may be null.
enum HexspanStatus hexspan_stretch_factor(const struct HexspanTriangulation *t,
                                          double *ratio,
                                          size_t *s,
                                          size_t *u);

// Number of triangles crossed by the segment between sites `s` and `u`.
//
// # Safety
// `t` must be a live handle and `out` writable.
enum HexspanStatus hexspan_walk_length(const struct HexspanTriangulation *t,
                                       size_t s,
                                       size_t u,
                                       size_t *out);

// Runs every check over all ordered pairs of a hexagon triangulation and
// reports the number of checks run and failed.
//
// # Safety
// `t` must be a live handle and the out pointers writable.
enum HexspanStatus hexspan_verify(const struct HexspanTriangulation *t,
                                  size_t *checked,
                                  size_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEXSPAN_H */
