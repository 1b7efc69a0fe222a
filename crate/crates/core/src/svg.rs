//! Static SVG drawings of triangulations, walks and sweep traces.
//!
//! Geometry is written in the caller's coordinates under a y-flip group, so
//! attribute values are the points' own coordinates.

use std::fmt::Write;

use crate::circumscription::shape_circumscriptions;
use crate::delaunay::Triangulation;
use crate::geom::{Point, TAU};
use crate::shape::ConvexShape;
use crate::sweep::SweepTrace;

fn fmt(v: f64) -> String {
    let s = format!("{v:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn points_attr(pts: &[Point]) -> String {
    pts.iter().map(|p| format!("{},{}", fmt(p.x), fmt(p.y))).collect::<Vec<_>>().join(" ")
}

fn bounds(pts: impl IntoIterator<Item = Point>) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if !lo.x.is_finite() {
        return (Point::ORIGIN, Point::new(1.0, 1.0));
    }
    (lo, hi)
}

/// Document header with a viewBox around `lo..hi` and a y-flip group.
fn open(lo: Point, hi: Point) -> (String, f64) {
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let m = 0.05 * span;
    let (w, h) = (hi.x - lo.x + 2.0 * m, hi.y - lo.y + 2.0 * m);
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="800" height="{}" viewBox="{} {} {} {}">"#,
        (800.0 * h / w).round(),
        fmt(lo.x - m),
        fmt(-(hi.y + m)),
        fmt(w),
        fmt(h)
    )
    .unwrap();
    writeln!(s, r#"<g transform="scale(1,-1)">"#).unwrap();
    (s, span)
}

fn close(mut s: String) -> String {
    s.push_str("</g>\n</svg>\n");
    s
}

/// Empty homothets of `shape`, one per triangle, as corner lists.
pub fn witness_polygons(tri: &Triangulation, shape: &ConvexShape) -> Vec<Vec<Point>> {
    let pts = &tri.points;
    tri.triangles
        .iter()
        .filter_map(|t| {
            let [a, b, c] = t.map(|k| pts[k]);
            shape_circumscriptions(shape, a, b, c)
                .into_iter()
                .find(|f| {
                    pts.iter()
                        .all(|&q| shape.gauge(q - f.center) >= f.scale - TAU * f.scale.max(1.0))
                })
                .map(|f| shape.corners(f.center, f.scale))
        })
        .collect()
}

/// One polygon per triangle, a line per bridge, one polygon per witness,
/// then the sites.
pub fn triangulation_svg(tri: &Triangulation, witnesses: &[Vec<Point>], highlight: &[usize]) -> String {
    let (lo, hi) = bounds(tri.points.iter().copied());
    let (mut s, span) = open(lo, hi);
    let stroke = fmt(span * 0.002);
    for (k, t) in tri.triangles.iter().enumerate() {
        let fill = if highlight.contains(&k) { "#f4d35e" } else { "none" };
        writeln!(
            s,
            r##"<polygon class="triangle" points="{}" fill="{fill}" stroke="#333" stroke-width="{stroke}"/>"##,
            points_attr(&t.map(|v| tri.points[v]))
        )
        .unwrap();
    }
    for &(a, b) in &tri.bridges {
        let (p, q) = (tri.points[a], tri.points[b]);
        writeln!(
            s,
            r##"<line class="bridge" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333" stroke-width="{stroke}"/>"##,
            fmt(p.x),
            fmt(p.y),
            fmt(q.x),
            fmt(q.y)
        )
        .unwrap();
    }
    for w in witnesses {
        writeln!(
            s,
            r##"<polygon class="witness" points="{}" fill="none" stroke="#2a9d8f" stroke-width="{stroke}"/>"##,
            points_attr(w)
        )
        .unwrap();
    }
    let r = fmt(span * 0.006);
    for p in &tri.points {
        writeln!(s, r##"<circle cx="{}" cy="{}" r="{r}" fill="#000"/>"##, fmt(p.x), fmt(p.y)).unwrap();
    }
    close(s)
}

/// The triangulation with the walk's triangles filled and `[st]` drawn.
pub fn walk_svg(tri: &Triangulation, walk_triangles: &[usize], s: usize, t: usize) -> String {
    let body = triangulation_svg(tri, &[], walk_triangles);
    let (a, b) = (tri.points[s], tri.points[t]);
    let (lo, hi) = bounds(tri.points.iter().copied());
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let line = format!(
        r##"<line class="segment" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#e63946" stroke-width="{}"/>"##,
        fmt(a.x),
        fmt(a.y),
        fmt(b.x),
        fmt(b.y),
        fmt(span * 0.004)
    );
    body.replacen("</g>\n</svg>", &format!("{line}\n</g>\n</svg>"), 1)
}

/// Graphs of `r`, `U`, `L` and `P` against `x`, one polyline each.
pub fn sweep_svg(trace: &SweepTrace) -> String {
    type Pick = fn(&crate::sweep::Segment) -> crate::sweep::Lin;
    let series: [(&str, &str, Pick); 4] = [
        ("r", "#264653", |s| s.r),
        ("U", "#e76f51", |s| s.u_pot),
        ("L", "#2a9d8f", |s| s.l_pot),
        ("P", "#6a4c93", |s| s.p),
    ];
    let mut all = Vec::new();
    let mut lines = Vec::new();
    for (name, color, pick) in series {
        let mut pts = Vec::new();
        for seg in &trace.segments {
            let f = pick(seg);
            pts.push(Point::new(seg.x0, f.v0));
            pts.push(Point::new(seg.x1, f.at(seg.x0, seg.x1)));
        }
        all.extend(pts.iter().copied());
        lines.push((name, color, pts));
    }
    let (lo, hi) = bounds(all);
    let (mut s, span) = open(lo, hi);
    let stroke = fmt(span * 0.003);
    for (name, color, pts) in lines {
        writeln!(
            s,
            r#"<polyline class="{name}" points="{}" fill="none" stroke="{color}" stroke-width="{stroke}"/>"#,
            points_attr(&pts)
        )
        .unwrap();
    }
    for x in &trace.centers {
        writeln!(
            s,
            r##"<line class="center" x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#aaa" stroke-width="{3}"/>"##,
            fmt(*x),
            fmt(lo.y),
            fmt(hi.y),
            fmt(span * 0.001)
        )
        .unwrap();
    }
    close(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::build_hexagon_delaunay;
    use crate::random::uniform_points;

    #[test]
    fn one_polygon_per_triangle_and_witness() {
        let tri = build_hexagon_delaunay(&uniform_points(12, 1)).unwrap();
        let w = witness_polygons(&tri, &ConvexShape::hexagon());
        assert_eq!(w.len(), tri.triangles.len());
        let svg = triangulation_svg(&tri, &w, &[]);
        assert_eq!(svg.matches(r#"class="triangle""#).count(), tri.triangles.len());
        assert_eq!(svg.matches(r#"class="witness""#).count(), w.len());
        assert_eq!(svg.matches("<circle").count(), tri.points.len());
    }

    #[test]
    fn coordinates_are_the_points_own() {
        let tri = build_hexagon_delaunay(&uniform_points(6, 2)).unwrap();
        let svg = triangulation_svg(&tri, &[], &[]);
        for p in &tri.points {
            assert!(svg.contains(&format!(r#"cx="{}" cy="{}""#, fmt(p.x), fmt(p.y))));
            let back: f64 = fmt(p.x).parse().unwrap();
            assert!((back - p.x).abs() < 1e-6);
        }
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt(1.0), "1");
        assert_eq!(fmt(-0.0), "0");
        assert_eq!(fmt(0.125), "0.125");
        assert_eq!(fmt(1.0 / 3.0), "0.333333333");
    }
}
