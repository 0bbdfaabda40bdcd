//! C ABI over the manifold-heat toolkit.
//!
//! Conventions:
//! - Objects are opaque handles created by `mh_*_new`-style constructors
//!   and released with the matching `mh_*_free`; freeing a null pointer is
//!   a no-op.
//! - Every fallible call returns an [`MhStatus`]; outputs are written
//!   through out-pointers only on `MH_STATUS_OK`.
//! - Points are flat coordinate slices in the manifold's chart: `[theta]`
//!   for circles, `[theta, phi]` for tori and spheres, `[s]` for the
//!   hyperbolic and constant-curvature variants.
//! - `mh_last_error_message` retrieves a human-readable description of the
//!   most recent failure on the calling thread.

use manifold_heat::eigenmaps::eigenmap;
use manifold_heat::error::Error;
use manifold_heat::graph::{
    build_adjacency, laplacian, rw_spectrum, spectral_decompose, weight_matrix, AdjacencyRule,
    LaplacianKind, PointCloud, WeightedGraph,
};
use manifold_heat::manifolds::{
    constant_curvature_kernel, millson_step, point_from_coords, AnalyticManifold, KernelMethod,
};
use manifold_heat::varadhan::varadhan_estimate;
use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhStatus {
    Ok = 0,
    NullArgument = 1,
    Domain = 2,
    Unsupported = 3,
    Singularity = 4,
    Construction = 5,
    ShapeMismatch = 6,
    SpectralRange = 7,
    Budget = 8,
    Numeric = 9,
    Parse = 10,
    Io = 11,
    /// A panic was caught at the boundary; state may be inconsistent.
    Internal = 12,
}

/// Heat-kernel evaluation methods; `param` carries the image count,
/// truncation index, or starting node count where applicable.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhKernelMethod {
    ImageSum = 0,
    EigenSum = 1,
    ClosedForm = 2,
    Quadrature = 3,
}

/// Neighborhood rules for graph construction.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhAdjacencyRule {
    KNearest = 0,
    Epsilon = 1,
}

/// Graph Laplacian choices for the embedding entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhLaplacian {
    RandomWalk = 0,
    Symmetric = 1,
}

/// Opaque manifold handle.
pub struct MhManifold(AnalyticManifold);
/// Opaque point-cloud handle.
pub struct MhPointCloud(PointCloud);
/// Opaque weighted-graph handle.
pub struct MhGraph(WeightedGraph);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn status_of(e: &Error) -> MhStatus {
    match e {
        Error::Domain(_) => MhStatus::Domain,
        Error::Unsupported(_) => MhStatus::Unsupported,
        Error::Singularity(_) => MhStatus::Singularity,
        Error::Construction(_) => MhStatus::Construction,
        Error::ShapeMismatch(_) => MhStatus::ShapeMismatch,
        Error::SpectralRange(_) => MhStatus::SpectralRange,
        Error::Budget(_) => MhStatus::Budget,
        Error::Numeric { .. } => MhStatus::Numeric,
        Error::Parse(_) => MhStatus::Parse,
        Error::Io(_) => MhStatus::Io,
    }
}

fn fail(e: Error) -> MhStatus {
    let status = status_of(&e);
    LAST_ERROR.with(|slot| *slot.borrow_mut() = e.to_string());
    status
}

fn fail_null() -> MhStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = "null argument".into());
    MhStatus::NullArgument
}

/// Run a body, translating panics into `Internal`.
fn guarded<F: FnOnce() -> MhStatus>(f: F) -> MhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = "internal panic".into());
            MhStatus::Internal
        }
    }
}

/// Copy the last error message on this thread into `buf` (NUL-terminated,
/// truncated to `cap` bytes). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null (length query).
#[no_mangle]
pub unsafe extern "C" fn mh_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn write_manifold(out: *mut *mut MhManifold, m: AnalyticManifold) -> MhStatus {
    if out.is_null() {
        return fail_null();
    }
    *out = Box::into_raw(Box::new(MhManifold(m)));
    MhStatus::Ok
}

/// Circle of the given radius.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn mh_manifold_circle(radius: f64, out: *mut *mut MhManifold) -> MhStatus {
    guarded(|| match AnalyticManifold::circle(radius) {
        Ok(m) => write_manifold(out, m),
        Err(e) => fail(e),
    })
}

/// Flat torus with circle radii `a` and `b`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn mh_manifold_flat_torus(
    a: f64,
    b: f64,
    out: *mut *mut MhManifold,
) -> MhStatus {
    guarded(|| match AnalyticManifold::flat_torus(a, b) {
        Ok(m) => write_manifold(out, m),
        Err(e) => fail(e),
    })
}

/// Unit round 2-sphere.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn mh_manifold_sphere(out: *mut *mut MhManifold) -> MhStatus {
    guarded(|| write_manifold(out, AnalyticManifold::Sphere2))
}

/// Hyperbolic space of dimension 2 or 3.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn mh_manifold_hyperbolic(dim: u32, out: *mut *mut MhManifold) -> MhStatus {
    guarded(|| match dim {
        2 => write_manifold(out, AnalyticManifold::Hyperbolic2),
        3 => write_manifold(out, AnalyticManifold::Hyperbolic3),
        _ => fail(Error::unsupported("hyperbolic dimension must be 2 or 3")),
    })
}

/// Simply connected space of constant curvature `kappa != 0`, dimension 2
/// or 3.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn mh_manifold_constant_curvature(
    kappa: f64,
    dim: u32,
    out: *mut *mut MhManifold,
) -> MhStatus {
    guarded(|| match AnalyticManifold::constant_curvature(kappa, dim) {
        Ok(m) => write_manifold(out, m),
        Err(e) => fail(e),
    })
}

/// Release a manifold handle.
///
/// # Safety
/// `m` must come from a constructor in this library (or be null).
#[no_mangle]
pub unsafe extern "C" fn mh_manifold_free(m: *mut MhManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

/// Geodesic distance between two chart points.
///
/// # Safety
/// `m`, the coordinate arrays, and `out` must be valid for their lengths.
#[no_mangle]
pub unsafe extern "C" fn mh_geodesic_distance(
    m: *const MhManifold,
    p: *const f64,
    p_len: usize,
    q: *const f64,
    q_len: usize,
    out: *mut f64,
) -> MhStatus {
    guarded(|| {
        let (Some(manifold), Some(pc), Some(qc)) =
            (m.as_ref(), slice_arg(p, p_len), slice_arg(q, q_len))
        else {
            return fail_null();
        };
        if out.is_null() {
            return fail_null();
        }
        let result = point_from_coords(&manifold.0, pc)
            .and_then(|pp| point_from_coords(&manifold.0, qc).map(|qq| (pp, qq)))
            .and_then(|(pp, qq)| manifold.0.geodesic_distance(&pp, &qq));
        match result {
            Ok(d) => {
                *out = d;
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

fn kernel_method(method: MhKernelMethod, param: usize) -> KernelMethod {
    match method {
        MhKernelMethod::ImageSum => KernelMethod::ImageSum { images: param },
        MhKernelMethod::EigenSum => KernelMethod::EigenSum { truncation: param },
        MhKernelMethod::ClosedForm => KernelMethod::ClosedForm,
        MhKernelMethod::Quadrature => KernelMethod::Quadrature { nodes: param },
    }
}

/// Heat kernel between two chart points at time `t`.
///
/// # Safety
/// `m`, the coordinate arrays, and `out` must be valid for their lengths.
#[no_mangle]
pub unsafe extern "C" fn mh_heat_kernel(
    m: *const MhManifold,
    p: *const f64,
    p_len: usize,
    q: *const f64,
    q_len: usize,
    t: f64,
    method: MhKernelMethod,
    param: usize,
    out: *mut f64,
) -> MhStatus {
    guarded(|| {
        let (Some(manifold), Some(pc), Some(qc)) =
            (m.as_ref(), slice_arg(p, p_len), slice_arg(q, q_len))
        else {
            return fail_null();
        };
        if out.is_null() {
            return fail_null();
        }
        let result = point_from_coords(&manifold.0, pc)
            .and_then(|pp| point_from_coords(&manifold.0, qc).map(|qq| (pp, qq)))
            .and_then(|(pp, qq)| {
                manifold
                    .0
                    .heat_kernel(&pp, &qq, t, &kernel_method(method, param))
            });
        match result {
            Ok(h) => {
                *out = h;
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Natural log of the heat kernel through the certified per-variant path;
/// usable deep in the small-time regime.
///
/// # Safety
/// `m`, the coordinate arrays, and `out` must be valid for their lengths.
#[no_mangle]
pub unsafe extern "C" fn mh_log_heat_kernel(
    m: *const MhManifold,
    p: *const f64,
    p_len: usize,
    q: *const f64,
    q_len: usize,
    t: f64,
    out: *mut f64,
) -> MhStatus {
    guarded(|| {
        let (Some(manifold), Some(pc), Some(qc)) =
            (m.as_ref(), slice_arg(p, p_len), slice_arg(q, q_len))
        else {
            return fail_null();
        };
        if out.is_null() {
            return fail_null();
        }
        let result = point_from_coords(&manifold.0, pc)
            .and_then(|pp| point_from_coords(&manifold.0, qc).map(|qq| (pp, qq)))
            .and_then(|(pp, qq)| manifold.0.log_heat_kernel(&pp, &qq, t));
        match result {
            Ok(h) => {
                *out = h;
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// First `count` eigenvalues (with multiplicity) of a compact variant.
///
/// # Safety
/// `out` must point to at least `count` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mh_eigenvalues(
    m: *const MhManifold,
    count: usize,
    out: *mut f64,
) -> MhStatus {
    guarded(|| {
        let Some(manifold) = m.as_ref() else {
            return fail_null();
        };
        if out.is_null() {
            return fail_null();
        }
        match manifold.0.eigen_pairs(count) {
            Ok(pairs) => {
                for (i, pair) in pairs.iter().enumerate() {
                    *out.add(i) = pair.eigenvalue;
                }
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Distance-squared estimator `-4 t log h`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mh_varadhan_estimate(h: f64, t: f64, out: *mut f64) -> MhStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null();
        }
        match varadhan_estimate(h, t) {
            Ok(v) => {
                *out = v;
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Constant-curvature kernel at separation `s`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mh_constant_curvature_kernel(
    kappa: f64,
    dim: u32,
    s: f64,
    t: f64,
    out: *mut f64,
) -> MhStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null();
        }
        match constant_curvature_kernel(kappa, dim, s, t) {
            Ok(v) => {
                *out = v;
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// One recurrence step from the one-dimensional Gaussian base kernel.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mh_millson_step(base_dim: u32, s: f64, t: f64, out: *mut f64) -> MhStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null();
        }
        match millson_step(base_dim, s, t) {
            Ok(v) => {
                *out = v;
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Point cloud from a row-major `n_points x dim` array.
///
/// # Safety
/// `data` must hold `n_points * dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mh_point_cloud_new(
    data: *const f64,
    n_points: usize,
    dim: usize,
    out: *mut *mut MhPointCloud,
) -> MhStatus {
    guarded(|| {
        if data.is_null() || out.is_null() {
            return fail_null();
        }
        let flat = std::slice::from_raw_parts(data, n_points * dim);
        let points: Vec<Vec<f64>> = flat.chunks(dim).map(|c| c.to_vec()).collect();
        match PointCloud::new(points, None) {
            Ok(pc) => {
                *out = Box::into_raw(Box::new(MhPointCloud(pc)));
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a point-cloud handle.
///
/// # Safety
/// `pc` must come from `mh_point_cloud_new` (or be null).
#[no_mangle]
pub unsafe extern "C" fn mh_point_cloud_free(pc: *mut MhPointCloud) {
    if !pc.is_null() {
        drop(Box::from_raw(pc));
    }
}

/// Binary neighborhood graph over a cloud. `k` is used by the k-nearest
/// rule, `epsilon` by the epsilon rule.
///
/// # Safety
/// `pc` and `out` must be valid handles/pointers.
#[no_mangle]
pub unsafe extern "C" fn mh_graph_build(
    pc: *const MhPointCloud,
    rule: MhAdjacencyRule,
    k: usize,
    epsilon: f64,
    out: *mut *mut MhGraph,
) -> MhStatus {
    guarded(|| {
        let Some(cloud) = pc.as_ref() else {
            return fail_null();
        };
        if out.is_null() {
            return fail_null();
        }
        let rule = match rule {
            MhAdjacencyRule::KNearest => AdjacencyRule::KNearest(k),
            MhAdjacencyRule::Epsilon => AdjacencyRule::Epsilon(epsilon),
        };
        match build_adjacency(&cloud.0, rule) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(MhGraph(g)));
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Gaussian edge weights `exp(-|x_i - x_j|^2 / t)` on an adjacency graph,
/// with unit self-loops.
///
/// # Safety
/// `g`, `pc`, and `out` must be valid handles/pointers.
#[no_mangle]
pub unsafe extern "C" fn mh_graph_gaussian_weights(
    g: *const MhGraph,
    pc: *const MhPointCloud,
    t: f64,
    out: *mut *mut MhGraph,
) -> MhStatus {
    guarded(|| {
        let (Some(graph), Some(cloud)) = (g.as_ref(), pc.as_ref()) else {
            return fail_null();
        };
        if out.is_null() {
            return fail_null();
        }
        match weight_matrix(&graph.0, &cloud.0, t) {
            Ok(weighted) => {
                *out = Box::into_raw(Box::new(MhGraph(weighted)));
                MhStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of vertices in a graph.
///
/// # Safety
/// `g` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mh_graph_len(g: *const MhGraph, out: *mut usize) -> MhStatus {
    guarded(|| {
        let Some(graph) = g.as_ref() else {
            return fail_null();
        };
        if out.is_null() {
            return fail_null();
        }
        *out = graph.0.len();
        MhStatus::Ok
    })
}

/// Release a graph handle.
///
/// # Safety
/// `g` must come from a graph constructor (or be null).
#[no_mangle]
pub unsafe extern "C" fn mh_graph_free(g: *mut MhGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Eigenmap coordinates: `n_components` columns per vertex, written
/// row-major into `out` (`n_vertices * n_components` doubles).
///
/// # Safety
/// `g` must be valid and `out` large enough for the full matrix.
#[no_mangle]
pub unsafe extern "C" fn mh_eigenmap(
    g: *const MhGraph,
    kind: MhLaplacian,
    n_components: usize,
    out: *mut f64,
) -> MhStatus {
    guarded(|| {
        let Some(graph) = g.as_ref() else {
            return fail_null();
        };
        if out.is_null() {
            return fail_null();
        }
        let dec = match kind {
            MhLaplacian::RandomWalk => rw_spectrum(&graph.0),
            MhLaplacian::Symmetric => {
                laplacian(&graph.0, LaplacianKind::Symmetric).and_then(|l| spectral_decompose(&l))
            }
        };
        let map = match dec.and_then(|d| eigenmap(&d, n_components)) {
            Ok(map) => map,
            Err(e) => return fail(e),
        };
        for i in 0..map.n_rows() {
            for j in 0..map.n_cols() {
                *out.add(i * map.n_cols() + j) = map.get(i, j);
            }
        }
        MhStatus::Ok
    })
}
