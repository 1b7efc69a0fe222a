use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use hexspan_ffi::*;

unsafe fn build(xy: &[f64], shape: HexspanShape) -> (HexspanStatus, *mut HexspanTriangulation) {
    let mut h = ptr::null_mut();
    let st = hexspan_triangulate(xy.as_ptr(), xy.len() / 2, shape as u32, &mut h);
    (st, h)
}

#[test]
fn three_points_make_one_triangle() {
    unsafe {
        let (st, h) = build(&[0.0, 0.0, 1.0, 0.1, 0.4, 1.0], HexspanShape::Hexagon);
        assert_eq!(st, HexspanStatus::Ok);
        let mut n = 0;
        assert_eq!(hexspan_triangle_count(h, &mut n), HexspanStatus::Ok);
        assert_eq!(n, 1);
        let mut tri = [0usize; 3];
        assert_eq!(hexspan_triangles(h, tri.as_mut_ptr(), 3), HexspanStatus::Ok);
        let mut sorted = tri;
        sorted.sort_unstable();
        assert_eq!(sorted, [0, 1, 2]);
        assert_eq!(hexspan_triangles(h, tri.as_mut_ptr(), 2), HexspanStatus::BufferTooSmall);
        let mut np = 0;
        assert_eq!(hexspan_point_count(h, &mut np), HexspanStatus::Ok);
        assert_eq!(np, 3);
        hexspan_triangulation_free(h);
    }
}

#[test]
fn family_stretch_matches_the_closed_form() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(hexspan_lower_bound_family(5, &mut h), HexspanStatus::Ok);
        let mut n = 0;
        hexspan_triangle_count(h, &mut n);
        assert_eq!(n, 10);
        let (mut r, mut s, mut t) = (0.0, 0, 0);
        assert_eq!(hexspan_stretch_factor(h, &mut r, &mut s, &mut t), HexspanStatus::Ok);
        assert!((r - hexspan_expected_lower_bound_stretch(5)).abs() <= 1e-9);
        assert_ne!(s, t);
        let (mut checked, mut failed) = (0, 0);
        assert_eq!(hexspan_verify(h, &mut checked, &mut failed), HexspanStatus::Ok);
        assert!(checked > 0);
        assert_eq!(failed, 0);
        hexspan_triangulation_free(h);
    }
    assert!(hexspan_expected_lower_bound_stretch(0).is_nan());
}

#[test]
fn errors_are_reported_as_codes() {
    unsafe {
        let (st, h) = build(&[0.0, 0.0, 0.0, 1.0, 1.0, 0.3], HexspanShape::Hexagon);
        assert_eq!(st, HexspanStatus::GeneralPosition);
        assert!(h.is_null());
        let (st, _) = build(&[0.0, 0.0, 1.0, 0.2], HexspanShape::Hexagon);
        assert_eq!(st, HexspanStatus::TooFewPoints);
        let (st, _) = build(&[0.0, 0.0, 1.0, f64::NAN, 0.4, 1.0], HexspanShape::Hexagon);
        assert_eq!(st, HexspanStatus::InvalidArgument);
        let mut h = ptr::null_mut();
        let xy = [0.0, 0.0, 1.0, 0.1, 0.4, 1.0];
        assert_eq!(hexspan_triangulate(xy.as_ptr(), 3, 7, &mut h), HexspanStatus::InvalidArgument);
        assert_eq!(hexspan_triangulate(ptr::null(), 3, 0, &mut h), HexspanStatus::NullPointer);
        assert_eq!(hexspan_triangulate(xy.as_ptr(), 3, 0, ptr::null_mut()), HexspanStatus::NullPointer);
        assert_eq!(hexspan_lower_bound_family(0, &mut h), HexspanStatus::InvalidArgument);
        let mut n = 0;
        assert_eq!(hexspan_triangle_count(ptr::null(), &mut n), HexspanStatus::NullPointer);
        let mut r = 0.0;
        assert_eq!(hexspan_stretch_factor(ptr::null(), &mut r, ptr::null_mut(), ptr::null_mut()), HexspanStatus::NullPointer);
        hexspan_triangulation_free(ptr::null_mut());

        let (st, h) = build(&[0.0, 0.0, 1.0, 0.1, 0.4, 1.0], HexspanShape::Square);
        assert_eq!(st, HexspanStatus::Ok);
        let (mut c, mut f) = (0, 0);
        assert_eq!(hexspan_verify(h, &mut c, &mut f), HexspanStatus::InvalidArgument);
        let mut len = 0;
        assert_eq!(hexspan_walk_length(h, 0, 0, &mut len), HexspanStatus::InvalidArgument);
        hexspan_triangulation_free(h);
    }
    for code in 0..=8u32 {
        let msg = unsafe { CStr::from_ptr(hexspan_status_message(code)) };
        assert!(!msg.to_str().unwrap().is_empty());
    }
    let v = unsafe { CStr::from_ptr(hexspan_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn walk_length_counts_crossed_triangles() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(hexspan_lower_bound_family(3, &mut h), HexspanStatus::Ok);
        let mut len = 0;
        let st = hexspan_walk_length(h, 0, 1, &mut len);
        assert_eq!(st, HexspanStatus::Ok);
        assert!(len >= 1);
        hexspan_triangulation_free(h);
    }
}

#[test]
fn header_declares_every_export_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hexspan.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "hexspan_status_message",
        "hexspan_version",
        "hexspan_triangulate",
        "hexspan_lower_bound_family",
        "hexspan_expected_lower_bound_stretch",
        "hexspan_triangulation_free",
        "hexspan_point_count",
        "hexspan_triangle_count",
        "hexspan_triangles",
        "hexspan_stretch_factor",
        "hexspan_walk_length",
        "hexspan_verify",
        "typedef struct HexspanTriangulation HexspanTriangulation;",
        "HEXSPAN_STATUS_GENERAL_POSITION = 4",
        "HEXSPAN_SHAPE_SQUARE = 2",
    ] {
        assert!(text.contains(name), "{name} missing from the header");
    }
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"hexspan.h\"\nint main(void) { HexspanTriangulation *h = 0; size_t n = 0;\n\
         return hexspan_triangle_count(h, &n) == HEXSPAN_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "header does not compile as C99"),
        Err(e) => eprintln!("skipping C compile check, no compiler: {e}"),
    }
}

const C_PROGRAM: &str = r#"#include <stdio.h>
#include "hexspan.h"
int main(void) {
    double xy[6] = {0.0, 0.0, 1.0, 0.1, 0.4, 1.0};
    HexspanTriangulation *h = NULL;
    size_t n = 0;
    double r = 0.0;
    if (hexspan_triangulate(xy, 3, HEXSPAN_SHAPE_HEXAGON, &h) != HEXSPAN_STATUS_OK) return 1;
    if (hexspan_triangle_count(h, &n) != HEXSPAN_STATUS_OK || n != 1) return 2;
    hexspan_triangulation_free(h);
    if (hexspan_lower_bound_family(4, &h) != HEXSPAN_STATUS_OK) return 3;
    if (hexspan_stretch_factor(h, &r, NULL, NULL) != HEXSPAN_STATUS_OK) return 4;
    hexspan_triangulation_free(h);
    double e = hexspan_expected_lower_bound_stretch(4);
    if (r - e > 1e-9 || e - r > 1e-9) return 5;
    printf("%s %.12f\n", hexspan_status_message(HEXSPAN_STATUS_OK), r);
    return 0;
}
"#;

/// Links a C program against the static library when it is next to the test
/// binary.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps.join("libhexspan_ffi.a"), deps.parent().unwrap().join("libhexspan_ffi.a")]
        .into_iter()
        .find(|p| p.exists());
    let Some(lib) = lib else {
        eprintln!("skipping link check, static library not built");
        return;
    };
    let header_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let built = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&header_dir)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status();
    match built {
        Ok(s) => assert!(s.success(), "C program failed to build"),
        Err(e) => {
            eprintln!("skipping link check, no compiler: {e}");
            return;
        }
    }
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    let expected = format!("ok {:.12}\n", hexspan_expected_lower_bound_stretch(4));
    assert_eq!(text, expected);
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("hexspan-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
