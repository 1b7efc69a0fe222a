//! C ABI over the hexspan library.
//!
//! Every function returns a [`HexspanStatus`] and writes results through out
//! pointers. Triangulations are opaque handles released with
//! [`hexspan_triangulation_free`]. Panics are caught and reported as
//! `HEXSPAN_STATUS_INTERNAL`.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hexspan::constructions::{expected_lower_bound_stretch, lower_bound_family};
use hexspan::delaunay::{build_shape_delaunay, DelaunayError, Triangulation};
use hexspan::geom::Point;
use hexspan::shape::ConvexShape;
use hexspan::spanner::{stretch_factor, SpannerError};
use hexspan::verify::{verify_triangulation, VerifyOptions};
use hexspan::walk::decompose;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HexspanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TooFewPoints = 3,
    GeneralPosition = 4,
    Disconnected = 5,
    WalkFailed = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// Shape whose homothets define the triangulation.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HexspanShape {
    Hexagon = 0,
    Triangle = 1,
    Square = 2,
}

/// Opaque triangulation handle.
pub struct HexspanTriangulation {
    inner: Triangulation,
}

fn guard(f: impl FnOnce() -> HexspanStatus) -> HexspanStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(HexspanStatus::Internal)
}

fn shape_of(shape: u32) -> Option<ConvexShape> {
    match shape {
        0 => Some(ConvexShape::hexagon()),
        1 => Some(ConvexShape::triangle()),
        2 => Some(ConvexShape::square()),
        _ => None,
    }
}

fn delaunay_status(e: &DelaunayError) -> HexspanStatus {
    match e {
        DelaunayError::TooFewPoints(_) => HexspanStatus::TooFewPoints,
        _ => HexspanStatus::GeneralPosition,
    }
}

/// Static description of a [`HexspanStatus`] value.
#[no_mangle]
pub extern "C" fn hexspan_status_message(status: u32) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"invalid argument\0",
        3 => b"too few points\0",
        4 => b"points are not in general position\0",
        5 => b"graph is disconnected\0",
        6 => b"walk could not be built\0",
        7 => b"output buffer too small\0",
        8 => b"internal error\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}

/// Library version, NUL-terminated.
#[no_mangle]
pub extern "C" fn hexspan_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds the triangulation of `n` points given as interleaved `x, y` pairs.
/// `shape` is a [`HexspanShape`] value.
///
/// # Safety
/// `xy` must point to `2 * n` readable doubles and `out` to a writable handle
/// slot.
#[no_mangle]
pub unsafe extern "C" fn hexspan_triangulate(
    xy: *const f64,
    n: usize,
    shape: u32,
    out: *mut *mut HexspanTriangulation,
) -> HexspanStatus {
    guard(|| {
        if xy.is_null() || out.is_null() {
            return HexspanStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let Some(shape) = shape_of(shape) else {
            return HexspanStatus::InvalidArgument;
        };
        let raw = std::slice::from_raw_parts(xy, 2 * n);
        if raw.iter().any(|v| !v.is_finite()) {
            return HexspanStatus::InvalidArgument;
        }
        let points: Vec<Point> = raw.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect();
        match build_shape_delaunay(&points, &shape) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(HexspanTriangulation { inner: t }));
                HexspanStatus::Ok
            }
            Err(e) => delaunay_status(&e),
        }
    })
}

/// Builds the lower-bound family with `k ≥ 1` rungs.
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn hexspan_lower_bound_family(k: usize, out: *mut *mut HexspanTriangulation) -> HexspanStatus {
    guard(|| {
        if out.is_null() {
            return HexspanStatus::NullPointer;
        }
        *out = ptr::null_mut();
        if k == 0 {
            return HexspanStatus::InvalidArgument;
        }
        match build_shape_delaunay(&lower_bound_family(k).points, &ConvexShape::hexagon()) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(HexspanTriangulation { inner: t }));
                HexspanStatus::Ok
            }
            Err(e) => delaunay_status(&e),
        }
    })
}

/// Closed-form stretch factor of the lower-bound family, or NaN for `k = 0`.
#[no_mangle]
pub extern "C" fn hexspan_expected_lower_bound_stretch(k: usize) -> f64 {
    if k == 0 {
        return f64::NAN;
    }
    expected_lower_bound_stretch(k)
}

/// Releases a handle. Null is accepted.
///
/// # Safety
/// `t` must be null or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hexspan_triangulation_free(t: *mut HexspanTriangulation) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of sites.
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hexspan_point_count(t: *const HexspanTriangulation, out: *mut usize) -> HexspanStatus {
    guard(|| match (t.as_ref(), out.is_null()) {
        (Some(t), false) => {
            *out = t.inner.points.len();
            HexspanStatus::Ok
        }
        _ => HexspanStatus::NullPointer,
    })
}

/// Number of triangles.
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hexspan_triangle_count(t: *const HexspanTriangulation, out: *mut usize) -> HexspanStatus {
    guard(|| match (t.as_ref(), out.is_null()) {
        (Some(t), false) => {
            *out = t.inner.triangles.len();
            HexspanStatus::Ok
        }
        _ => HexspanStatus::NullPointer,
    })
}

/// Copies the counterclockwise vertex triples into `out` (`3 × count`
/// entries). `cap` is the number of `size_t` slots available.
///
/// # Safety
/// `t` must be a live handle and `out` must have `cap` writable slots.
#[no_mangle]
pub unsafe extern "C" fn hexspan_triangles(t: *const HexspanTriangulation, out: *mut usize, cap: usize) -> HexspanStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return HexspanStatus::NullPointer;
        };
        if out.is_null() {
            return HexspanStatus::NullPointer;
        }
        let flat: Vec<usize> = t.inner.triangles.iter().flatten().copied().collect();
        if cap < flat.len() {
            return HexspanStatus::BufferTooSmall;
        }
        ptr::copy_nonoverlapping(flat.as_ptr(), out, flat.len());
        HexspanStatus::Ok
    })
}

/// Exact stretch factor with its witness pair.
///
/// # Safety
/// `t` must be a live handle; the out pointers must be writable. `s` and
/// `u` may be null.
#[no_mangle]
pub unsafe extern "C" fn hexspan_stretch_factor(
    t: *const HexspanTriangulation,
    ratio: *mut f64,
    s: *mut usize,
    u: *mut usize,
) -> HexspanStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return HexspanStatus::NullPointer;
        };
        if ratio.is_null() {
            return HexspanStatus::NullPointer;
        }
        match stretch_factor(&t.inner) {
            Ok(r) => {
                *ratio = r.max_ratio;
                if !s.is_null() {
                    *s = r.witness_pair.0;
                }
                if !u.is_null() {
                    *u = r.witness_pair.1;
                }
                HexspanStatus::Ok
            }
            Err(SpannerError::Disconnected(..)) => HexspanStatus::Disconnected,
            Err(_) => HexspanStatus::Internal,
        }
    })
}

/// Number of triangles crossed by the segment between sites `s` and `u`.
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hexspan_walk_length(
    t: *const HexspanTriangulation,
    s: usize,
    u: usize,
    out: *mut usize,
) -> HexspanStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return HexspanStatus::NullPointer;
        };
        if out.is_null() {
            return HexspanStatus::NullPointer;
        }
        let n = t.inner.points.len();
        if s >= n || u >= n || s == u {
            return HexspanStatus::InvalidArgument;
        }
        match decompose(&t.inner, s, u) {
            Ok(w) => {
                *out = w.n();
                HexspanStatus::Ok
            }
            Err(_) => HexspanStatus::WalkFailed,
        }
    })
}

/// Runs every check over all ordered pairs of a hexagon triangulation and
/// reports the number of checks run and failed.
///
/// # Safety
/// `t` must be a live handle and the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn hexspan_verify(
    t: *const HexspanTriangulation,
    checked: *mut usize,
    failed: *mut usize,
) -> HexspanStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return HexspanStatus::NullPointer;
        };
        if checked.is_null() || failed.is_null() {
            return HexspanStatus::NullPointer;
        }
        if t.inner.shape != hexspan::shape::ShapeKind::Hexagon {
            return HexspanStatus::InvalidArgument;
        }
        let rep = verify_triangulation(&t.inner, &VerifyOptions::default());
        *checked = rep.checks.values().map(|c| c.checked).sum();
        *failed = rep.checks.values().map(|c| c.failed).sum();
        HexspanStatus::Ok
    })
}
