/* C interface to the manifold-heat spectral geometry toolkit. */

#ifndef MANIFOLD_HEAT_H
#define MANIFOLD_HEAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum MhStatus {
  MH_STATUS_OK = 0,
  MH_STATUS_NULL_ARGUMENT = 1,
  MH_STATUS_DOMAIN = 2,
  MH_STATUS_UNSUPPORTED = 3,
  MH_STATUS_SINGULARITY = 4,
  MH_STATUS_CONSTRUCTION = 5,
  MH_STATUS_SHAPE_MISMATCH = 6,
  MH_STATUS_SPECTRAL_RANGE = 7,
  MH_STATUS_BUDGET = 8,
  MH_STATUS_NUMERIC = 9,
  MH_STATUS_PARSE = 10,
  MH_STATUS_IO = 11,
  /**
   * A panic was caught at the boundary; state may be inconsistent.
   */
  MH_STATUS_INTERNAL = 12,
} MhStatus;

/**
 * Heat-kernel evaluation methods; `param` carries the image count,
 * truncation index, or starting node count where applicable.
 */
typedef enum MhKernelMethod {
  MH_KERNEL_METHOD_IMAGE_SUM = 0,
  MH_KERNEL_METHOD_EIGEN_SUM = 1,
  MH_KERNEL_METHOD_CLOSED_FORM = 2,
  MH_KERNEL_METHOD_QUADRATURE = 3,
} MhKernelMethod;

/**
 * Neighborhood rules for graph construction.
 */
typedef enum MhAdjacencyRule {
  MH_ADJACENCY_RULE_K_NEAREST = 0,
  MH_ADJACENCY_RULE_EPSILON = 1,
} MhAdjacencyRule;

/**
 * Graph Laplacian choices for the embedding entry point.
 */
typedef enum MhLaplacian {
  MH_LAPLACIAN_RANDOM_WALK = 0,
  MH_LAPLACIAN_SYMMETRIC = 1,
} MhLaplacian;

/**
 * Opaque weighted-graph handle.
 */
typedef struct MhGraph MhGraph;

/**
 * Opaque manifold handle.
 */
typedef struct MhManifold MhManifold;

/**
 * Opaque point-cloud handle.
 */
typedef struct MhPointCloud MhPointCloud;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message on this thread into `buf` (NUL-terminated,
 * truncated to `cap` bytes). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes, or be null (length query).
 */
uintptr_t mh_last_error_message(char *buf, uintptr_t cap);

/**
 * Circle of the given radius.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum MhStatus mh_manifold_circle(double radius, struct MhManifold **out);

/**
 * Flat torus with circle radii `a` and `b`.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum MhStatus mh_manifold_flat_torus(double a, double b, struct MhManifold **out);

/**
 * Unit round 2-sphere.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum MhStatus mh_manifold_sphere(struct MhManifold **out);

/**
 * Hyperbolic space of dimension 2 or 3.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum MhStatus mh_manifold_hyperbolic(uint32_t dim, struct MhManifold **out);

/**
 * Simply connected space of constant curvature `kappa != 0`, dimension 2
 * or 3.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum MhStatus mh_manifold_constant_curvature(double kappa, uint32_t dim, struct MhManifold **out);

/**
 * Release a manifold handle.
 *
 * # Safety
 * `m` must come from a constructor in this library (or be null).
 */
void mh_manifold_free(struct MhManifold *m);

/**
 * Geodesic distance between two chart points.
 *
 * # Safety
 * `m`, the coordinate arrays, and `out` must be valid for their lengths.
 */
enum MhStatus mh_geodesic_distance(const struct MhManifold *m,
                                   const double *p,
                                   uintptr_t p_len,
                                   const double *q,
                                   uintptr_t q_len,
                                   double *out);

/**
 * Heat kernel between two chart points at time `t`.
 *
 * # Safety
 * `m`, the coordinate arrays, and `out` must be valid for their lengths.
 */
enum MhStatus mh_heat_kernel(const struct MhManifold *m,
                             const double *p,
                             uintptr_t p_len,
                             const double *q,
                             uintptr_t q_len,
                             double t,
                             enum MhKernelMethod method,
                             uintptr_t param,
                             double *out);

/**
 * Natural log of the heat kernel through the certified per-variant path;
 * usable deep in the small-time regime.
 *
 * # Safety
 * `m`, the coordinate arrays, and `out` must be valid for their lengths.
 */
enum MhStatus mh_log_heat_kernel(const struct MhManifold *m,
                                 const double *p,
                                 uintptr_t p_len,
                                 const double *q,
                                 uintptr_t q_len,
                                 double t,
                                 double *out);

/**
 * First `count` eigenvalues (with multiplicity) of a compact variant.
 *
 * # Safety
 * `out` must point to at least `count` writable doubles.
 */
enum MhStatus mh_eigenvalues(const struct MhManifold *m, uintptr_t count, double *out);

/**
 * Distance-squared estimator `-4 t log h`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MhStatus mh_varadhan_estimate(double h, double t, double *out);

/**
 * Constant-curvature kernel at separation `s`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MhStatus mh_constant_curvature_kernel(double kappa,
                                           uint32_t dim,
                                           double s,
                                           double t,
                                           double *out);

/**
 * One recurrence step from the one-dimensional Gaussian base kernel.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MhStatus mh_millson_step(uint32_t base_dim, double s, double t, double *out);

/**
 * Point cloud from a row-major `n_points x dim` array.
 *
 * # Safety
 * `data` must hold `n_points * dim` doubles; `out` must be valid.
 */
enum MhStatus mh_point_cloud_new(const double *data,
                                 uintptr_t n_points,
                                 uintptr_t dim,
                                 struct MhPointCloud **out);

/**
 * Release a point-cloud handle.
 *
 * # Safety
 * `pc` must come from `mh_point_cloud_new` (or be null).
 */
void mh_point_cloud_free(struct MhPointCloud *pc);

/**
 * Binary neighborhood graph over a cloud. `k` is used by the k-nearest
 * rule, `epsilon` by the epsilon rule.
 *
 * # Safety
 * `pc` and `out` must be valid handles/pointers.
 */
enum MhStatus mh_graph_build(const struct MhPointCloud *pc,
                             enum MhAdjacencyRule rule,
                             uintptr_t k,
                             double epsilon,
                             struct MhGraph **out);

/**
 * Gaussian edge weights `exp(-|x_i - x_j|^2 / t)` on an adjacency graph,
 * with unit self-loops.
 *
 * # Safety
 * `g`, `pc`, and `out` must be valid handles/pointers.
 */
enum MhStatus mh_graph_gaussian_weights(const struct MhGraph *g,
                                        const struct MhPointCloud *pc,
                                        double t,
                                        struct MhGraph **out);

/**
 * Number of vertices in a graph.
 *
 * # Safety
 * `g` and `out` must be valid.
 */
enum MhStatus mh_graph_len(const struct MhGraph *g, uintptr_t *out);

/**
 * Release a graph handle.
 *
 * # Safety
 * `g` must come from a graph constructor (or be null).
 */
void mh_graph_free(struct MhGraph *g);

/**
 * Eigenmap coordinates: `n_components` columns per vertex, written
 * row-major into `out` (`n_vertices * n_components` doubles).
 *
 * # Safety
 * `g` must be valid and `out` large enough for the full matrix.
 */
enum MhStatus mh_eigenmap(const struct MhGraph *g,
                          enum MhLaplacian kind,
                          uintptr_t n_components,
                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MANIFOLD_HEAT_H */
