#ifndef SPHERELOCI_H
#define SPHERELOCI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_ARGUMENT = 2,
  SL_STATUS_DEGENERATE_SIMPLEX = 3,
  SL_STATUS_IDENTICAL_SIMPLEXES = 4,
  SL_STATUS_EMPTY_ZERO_SET = 5,
  SL_STATUS_SINGULAR = 6,
  SL_STATUS_PANIC = 7,
} SlStatus;

// Which angle constraint a locus encodes.
typedef enum SlLocusKind {
  SL_LOCUS_KIND_TANGENT = 0,
  SL_LOCUS_KIND_ORTHOGONAL = 1,
  SL_LOCUS_KIND_GENERAL = 2,
} SlLocusKind;

// Traced curves of a planar locus.
typedef struct SlCurves SlCurves;

// A locus function bound to a pair and an angle.
typedef struct SlLocus SlLocus;

// Triangulated surface of a spatial locus.
typedef struct SlMesh SlMesh;

// Two fixed simplexes.
typedef struct SlPair SlPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buffer` (NUL terminated,
// truncated to `capacity`). Returns the full message length in bytes, or 0
// when there is no error. `buffer` may be null to query the length.
//
// # Safety
// `buffer` must be null or valid for `capacity` bytes.
size_t sl_last_error_message(char *buffer, size_t capacity);

// Builds a pair from two row-major `dim × dim` vertex arrays.
//
// # Safety
// `first` and `second` must each hold `dim * dim` doubles; `out` must be writable.
enum SlStatus sl_pair_new(size_t dim,
                          const double *first,
                          const double *second,
                          struct SlPair **out);

// Releases a pair. Null is ignored.
//
// # Safety
// `pair` must come from [`sl_pair_new`] and not be used afterwards.
void sl_pair_free(struct SlPair *pair);

// Ambient dimension of a pair, or 0 for null.
//
// # Safety
// `pair` must be null or a live pair.
size_t sl_pair_dim(const struct SlPair *pair);

// cos² of the angle between the two radial vectors at `point`.
//
// # Safety
// `point` must hold `sl_pair_dim(pair)` doubles; `out` must be writable.
enum SlStatus sl_pair_angle_cos_sq(const struct SlPair *pair, const double *point, double *out);

// Binds a locus to `pair`. `cos_sq_alpha` is read only for
// `SL_LOCUS_KIND_GENERAL`. The tangent locus uses the first 2×2 minor in the
// plane and the sum of squared minors in higher dimensions.
//
// # Safety
// `pair` must be a live pair (it is copied); `out` must be writable.
enum SlStatus sl_locus_new(const struct SlPair *pair,
                           enum SlLocusKind kind,
                           double cos_sq_alpha,
                           struct SlLocus **out);

// Releases a locus. Null is ignored.
//
// # Safety
// `locus` must come from [`sl_locus_new`] and not be used afterwards.
void sl_locus_free(struct SlLocus *locus);

// Value of the locus polynomial at `point` and its normalized residual.
// `residual` may be null.
//
// # Safety
// `point` must hold as many doubles as the pair's dimension; `value` must be writable.
enum SlStatus sl_locus_eval(const struct SlLocus *locus,
                            const double *point,
                            double *value,
                            double *residual);

// Traces a planar locus over `bounds = {xmin, xmax, ymin, ymax}` with
// `resolution` cells per axis.
//
// # Safety
// `bounds` must hold 4 doubles; `out` must be writable.
enum SlStatus sl_trace_2d(const struct SlLocus *locus,
                          const double *bounds,
                          size_t resolution,
                          struct SlCurves **out);

// Number of polylines, or 0 for null.
//
// # Safety
// `curves` must be null or live.
size_t sl_curves_count(const struct SlCurves *curves);

// Vertex count of polyline `index`, or 0 when out of range.
//
// # Safety
// `curves` must be null or live.
size_t sl_curves_len(const struct SlCurves *curves, size_t index);

// Whether polyline `index` is closed (1) or open (0).
//
// # Safety
// `curves` must be null or live.
int32_t sl_curves_closed(const struct SlCurves *curves, size_t index);

// Copies polyline `index` into `xy` as interleaved x, y pairs. `capacity` is
// the number of points `xy` can hold and must be at least [`sl_curves_len`].
//
// # Safety
// `xy` must be writable for `2 * capacity` doubles.
enum SlStatus sl_curves_points(const struct SlCurves *curves,
                               size_t index,
                               double *xy,
                               size_t capacity);

// Releases traced curves. Null is ignored.
//
// # Safety
// `curves` must come from [`sl_trace_2d`] and not be used afterwards.
void sl_curves_free(struct SlCurves *curves);

// Meshes a spatial locus over `bounds = {xmin, xmax, ymin, ymax, zmin, zmax}`.
//
// # Safety
// `bounds` must hold 6 doubles; `out` must be writable.
enum SlStatus sl_mesh_3d(const struct SlLocus *locus,
                         const double *bounds,
                         size_t resolution,
                         struct SlMesh **out);

// Vertex count, or 0 for null.
//
// # Safety
// `mesh` must be null or live.
size_t sl_mesh_vertex_count(const struct SlMesh *mesh);

// Triangle count, or 0 for null.
//
// # Safety
// `mesh` must be null or live.
size_t sl_mesh_triangle_count(const struct SlMesh *mesh);

// Copies vertices as xyz triples and triangles as 0-based index triples.
// Either buffer may be null to skip it.
//
// # Safety
// `xyz` must hold `3 * sl_mesh_vertex_count` doubles and `indices`
// `3 * sl_mesh_triangle_count` integers when non-null.
enum SlStatus sl_mesh_copy(const struct SlMesh *mesh, double *xyz, uint32_t *indices);

// Euler characteristic of a closed mesh. Open meshes fail with
// `SL_STATUS_INVALID_ARGUMENT`.
//
// # Safety
// `mesh` must be live; `out` must be writable.
enum SlStatus sl_mesh_euler_characteristic(const struct SlMesh *mesh, int64_t *out);

// Releases a mesh. Null is ignored.
//
// # Safety
// `mesh` must come from [`sl_mesh_3d`] and not be used afterwards.
void sl_mesh_free(struct SlMesh *mesh);

// Library version as a static NUL-terminated string.
const char *sl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHERELOCI_H */
