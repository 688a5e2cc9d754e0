//! C interface. Every object crosses the boundary as an opaque pointer created
//! by a `sl_*_new`/producer function and released by the matching `sl_*_free`.
//! Every fallible call returns an [`SlStatus`]; the message of the last failure
//! on the calling thread is available through [`sl_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sphereloci::extract::{euler_characteristic, mesh_3d, trace_2d, GridSpec, Polyline, RefineOptions, TriangleMesh};
use sphereloci::geometry::{Point, Simplex, SimplexPair};
use sphereloci::locus::{angle_cos_sq, AngleParam, LocusFunction, LocusKind};
use sphereloci::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateSimplex = 3,
    IdenticalSimplexes = 4,
    EmptyZeroSet = 5,
    Singular = 6,
    Panic = 7,
}

/// Which angle constraint a locus encodes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlLocusKind {
    Tangent = 0,
    Orthogonal = 1,
    General = 2,
}

/// Two fixed simplexes.
pub struct SlPair(SimplexPair);

/// A locus function bound to a pair and an angle.
pub struct SlLocus(LocusFunction);

/// Traced curves of a planar locus.
pub struct SlCurves(Vec<Polyline>);

/// Triangulated surface of a spatial locus.
pub struct SlMesh(TriangleMesh);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DegenerateSimplex(_) => SlStatus::DegenerateSimplex,
            Error::IdenticalSimplexes => SlStatus::IdenticalSimplexes,
            Error::EmptyZeroSet => SlStatus::EmptyZeroSet,
            Error::DegenerateCircumsphere | Error::ZeroRadialVector => SlStatus::Singular,
            _ => SlStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SlStatus::NullPointer, format!("`{what}` is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(SlStatus::InvalidArgument, message.into())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SlStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {message}"));
            SlStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn reference<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Copies the last error message of this thread into `buffer` (NUL terminated,
/// truncated to `capacity`). Returns the full message length in bytes, or 0
/// when there is no error. `buffer` may be null to query the length.
///
/// # Safety
/// `buffer` must be null or valid for `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn sl_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(message) => {
            let bytes = message.as_bytes();
            if !buffer.is_null() && capacity > 0 {
                let n = bytes.len().min(capacity - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buffer, n);
                *buffer.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Builds a pair from two row-major `dim × dim` vertex arrays.
///
/// # Safety
/// `first` and `second` must each hold `dim * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_pair_new(
    dim: usize,
    first: *const f64,
    second: *const f64,
    out: *mut *mut SlPair,
) -> SlStatus {
    guard(|| {
        if !(2..=8).contains(&dim) {
            return Err(invalid(format!("dimension {dim} is outside 2..=8")));
        }
        let build = |data: &[f64], label: &str| -> Result<Simplex, Failure> {
            let vertices = data.chunks(dim).map(|c| Point::new(c.to_vec())).collect();
            Ok(Simplex::new(vertices, label)?)
        };
        let a = build(slice(first, dim * dim, "first")?, "first")?;
        let b = build(slice(second, dim * dim, "second")?, "second")?;
        let pair = SimplexPair::new(a, b)?;
        put(out, Box::into_raw(Box::new(SlPair(pair))), "out")
    })
}

/// Releases a pair. Null is ignored.
///
/// # Safety
/// `pair` must come from [`sl_pair_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_pair_free(pair: *mut SlPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Ambient dimension of a pair, or 0 for null.
///
/// # Safety
/// `pair` must be null or a live pair.
#[no_mangle]
pub unsafe extern "C" fn sl_pair_dim(pair: *const SlPair) -> usize {
    pair.as_ref().map_or(0, |p| p.0.dim())
}

/// cos² of the angle between the two radial vectors at `point`.
///
/// # Safety
/// `point` must hold `sl_pair_dim(pair)` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_pair_angle_cos_sq(pair: *const SlPair, point: *const f64, out: *mut f64) -> SlStatus {
    guard(|| {
        let pair = &reference(pair, "pair")?.0;
        let r = slice(point, pair.dim(), "point")?;
        put(out, angle_cos_sq(pair, r)?, "out")
    })
}

/// Binds a locus to `pair`. `cos_sq_alpha` is read only for
/// `SL_LOCUS_KIND_GENERAL`. The tangent locus uses the first 2×2 minor in the
/// plane and the sum of squared minors in higher dimensions.
///
/// # Safety
/// `pair` must be a live pair (it is copied); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_locus_new(
    pair: *const SlPair,
    kind: SlLocusKind,
    cos_sq_alpha: f64,
    out: *mut *mut SlLocus,
) -> SlStatus {
    guard(|| {
        let pair = &reference(pair, "pair")?.0;
        let (angle, kind) = match kind {
            SlLocusKind::Tangent if pair.dim() == 2 => (AngleParam::Tangent, LocusKind::G { i: 1, j: 2 }),
            SlLocusKind::Tangent => (AngleParam::Tangent, LocusKind::GSumSq),
            SlLocusKind::Orthogonal => (AngleParam::Orthogonal, LocusKind::H),
            SlLocusKind::General => (AngleParam::general(cos_sq_alpha)?, LocusKind::F),
        };
        let f = LocusFunction::new(pair.clone(), angle, kind)?;
        put(out, Box::into_raw(Box::new(SlLocus(f))), "out")
    })
}

/// Releases a locus. Null is ignored.
///
/// # Safety
/// `locus` must come from [`sl_locus_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_locus_free(locus: *mut SlLocus) {
    if !locus.is_null() {
        drop(Box::from_raw(locus));
    }
}

/// Value of the locus polynomial at `point` and its normalized residual.
/// `residual` may be null.
///
/// # Safety
/// `point` must hold as many doubles as the pair's dimension; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_locus_eval(
    locus: *const SlLocus,
    point: *const f64,
    value: *mut f64,
    residual: *mut f64,
) -> SlStatus {
    guard(|| {
        let f = &reference(locus, "locus")?.0;
        let r = slice(point, f.pair().dim(), "point")?;
        let (v, scale) = f.value_and_scale(r)?;
        put(value, v, "value")?;
        if !residual.is_null() {
            residual.write(sphereloci::extract::normalized_residual(v, scale));
        }
        Ok(())
    })
}

unsafe fn grid(dim: usize, bounds: *const f64, resolution: usize) -> Result<GridSpec, Failure> {
    let b = slice(bounds, 2 * dim, "bounds")?;
    let axes = b.chunks(2).map(|c| (c[0], c[1])).collect();
    Ok(GridSpec::uniform(axes, resolution)?)
}

/// Traces a planar locus over `bounds = {xmin, xmax, ymin, ymax}` with
/// `resolution` cells per axis.
///
/// # Safety
/// `bounds` must hold 4 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_trace_2d(
    locus: *const SlLocus,
    bounds: *const f64,
    resolution: usize,
    out: *mut *mut SlCurves,
) -> SlStatus {
    guard(|| {
        let f = &reference(locus, "locus")?.0;
        if f.pair().dim() != 2 {
            return Err(invalid("tracing needs a planar locus"));
        }
        let g = grid(2, bounds, resolution)?;
        let curves = trace_2d(f, &g, &RefineOptions::default())?;
        put(out, Box::into_raw(Box::new(SlCurves(curves))), "out")
    })
}

/// Number of polylines, or 0 for null.
///
/// # Safety
/// `curves` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn sl_curves_count(curves: *const SlCurves) -> usize {
    curves.as_ref().map_or(0, |c| c.0.len())
}

/// Vertex count of polyline `index`, or 0 when out of range.
///
/// # Safety
/// `curves` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn sl_curves_len(curves: *const SlCurves, index: usize) -> usize {
    curves.as_ref().and_then(|c| c.0.get(index)).map_or(0, Polyline::len)
}

/// Whether polyline `index` is closed (1) or open (0).
///
/// # Safety
/// `curves` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn sl_curves_closed(curves: *const SlCurves, index: usize) -> i32 {
    curves.as_ref().and_then(|c| c.0.get(index)).is_some_and(|p| p.closed) as i32
}

/// Copies polyline `index` into `xy` as interleaved x, y pairs. `capacity` is
/// the number of points `xy` can hold and must be at least [`sl_curves_len`].
///
/// # Safety
/// `xy` must be writable for `2 * capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn sl_curves_points(
    curves: *const SlCurves,
    index: usize,
    xy: *mut f64,
    capacity: usize,
) -> SlStatus {
    guard(|| {
        let c = &reference(curves, "curves")?.0;
        let line = c.get(index).ok_or_else(|| invalid(format!("polyline {index} out of range")))?;
        if capacity < line.len() {
            return Err(invalid(format!("buffer holds {capacity} points, need {}", line.len())));
        }
        if xy.is_null() {
            return Err(null("xy"));
        }
        let flat: Vec<f64> = line.points.iter().flatten().copied().collect();
        ptr::copy_nonoverlapping(flat.as_ptr(), xy, flat.len());
        Ok(())
    })
}

/// Releases traced curves. Null is ignored.
///
/// # Safety
/// `curves` must come from [`sl_trace_2d`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_curves_free(curves: *mut SlCurves) {
    if !curves.is_null() {
        drop(Box::from_raw(curves));
    }
}

/// Meshes a spatial locus over `bounds = {xmin, xmax, ymin, ymax, zmin, zmax}`.
///
/// # Safety
/// `bounds` must hold 6 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_mesh_3d(
    locus: *const SlLocus,
    bounds: *const f64,
    resolution: usize,
    out: *mut *mut SlMesh,
) -> SlStatus {
    guard(|| {
        let f = &reference(locus, "locus")?.0;
        if f.pair().dim() != 3 {
            return Err(invalid("meshing needs a locus in three dimensions"));
        }
        let g = grid(3, bounds, resolution)?;
        let mesh = mesh_3d(f, &g, &RefineOptions::default())?;
        put(out, Box::into_raw(Box::new(SlMesh(mesh))), "out")
    })
}

/// Vertex count, or 0 for null.
///
/// # Safety
/// `mesh` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn sl_mesh_vertex_count(mesh: *const SlMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.0.vertices.len())
}

/// Triangle count, or 0 for null.
///
/// # Safety
/// `mesh` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn sl_mesh_triangle_count(mesh: *const SlMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.0.triangles.len())
}

/// Copies vertices as xyz triples and triangles as 0-based index triples.
/// Either buffer may be null to skip it.
///
/// # Safety
/// `xyz` must hold `3 * sl_mesh_vertex_count` doubles and `indices`
/// `3 * sl_mesh_triangle_count` integers when non-null.
#[no_mangle]
pub unsafe extern "C" fn sl_mesh_copy(mesh: *const SlMesh, xyz: *mut f64, indices: *mut u32) -> SlStatus {
    guard(|| {
        let m = &reference(mesh, "mesh")?.0;
        if !xyz.is_null() {
            let flat: Vec<f64> = m.vertices.iter().flatten().copied().collect();
            ptr::copy_nonoverlapping(flat.as_ptr(), xyz, flat.len());
        }
        if !indices.is_null() {
            let flat: Vec<u32> = m.triangles.iter().flatten().copied().collect();
            ptr::copy_nonoverlapping(flat.as_ptr(), indices, flat.len());
        }
        Ok(())
    })
}

/// Euler characteristic of a closed mesh. Open meshes fail with
/// `SL_STATUS_INVALID_ARGUMENT`.
///
/// # Safety
/// `mesh` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_mesh_euler_characteristic(mesh: *const SlMesh, out: *mut i64) -> SlStatus {
    guard(|| {
        let m = &reference(mesh, "mesh")?.0;
        put(out, euler_characteristic(m)?, "out")
    })
}

/// Releases a mesh. Null is ignored.
///
/// # Safety
/// `mesh` must come from [`sl_mesh_3d`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_mesh_free(mesh: *mut SlMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
