//! Hexagon homothets through three points, the empty-homothet predicate and
//! a small exhaustive LP for the minimum enclosing hexagon.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::geom::{hexagon_norm, orient, Point, ScaledHexagon, Side, SideLocation, HEX_NORMALS, TAU};
use crate::shape::{det3, ConvexShape, ShapeFit};

/// A hexagon with three given points on its boundary, and where each point
/// touches it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HexCircumscription {
    pub hexagon: ScaledHexagon,
    pub points: [Point; 3],
    /// `OnSide` or `OnVertex` for each of `points`.
    pub contacts: [SideLocation; 3],
}

impl HexCircumscription {
    fn from_solution(points: [Point; 3], center: Point, apothem: f64, sides: [usize; 3]) -> Self {
        let hexagon = ScaledHexagon::new(center, apothem);
        let contacts = [0, 1, 2].map(|r| match hexagon.locate(points[r], TAU) {
            loc @ SideLocation::OnVertex(_) => loc,
            _ => SideLocation::OnSide(Side::from_label(sides[r])),
        });
        HexCircumscription {
            hexagon,
            points,
            contacts,
        }
    }

    /// True when no point of `others` is strictly inside, at tolerance `tol`.
    pub fn is_empty_of(&self, others: &[Point], tol: f64) -> bool {
        others.iter().all(|&q| !self.hexagon.strictly_contains(q, tol))
    }
}

/// Every hexagon homothet with `p1`, `p2`, `p3` on its boundary.
///
/// All 216 side assignments are solved directly. Results are deduplicated on
/// a rounded `(cx, cy, a)` key and sorted by apothem, then center.
pub fn circumhexagons_through(p1: Point, p2: Point, p3: Point) -> Vec<HexCircumscription> {
    let pts = [p1, p2, p3];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s1 in 0..6 {
        for s2 in 0..6 {
            for s3 in 0..6 {
                let sides = [s1, s2, s3];
                let Some((c, a)) = solve_assignment(&pts, sides) else {
                    continue;
                };
                if a <= 0.0 || !a.is_finite() {
                    continue;
                }
                let ok = (0..3).all(|r| {
                    let v = pts[r] - c;
                    let s = sides[r];
                    let prev = HEX_NORMALS[(s + 5) % 6];
                    let next = HEX_NORMALS[(s + 1) % 6];
                    prev.dot(v) <= a + TAU && next.dot(v) <= a + TAU && hexagon_norm(v) <= a + TAU
                });
                if !ok {
                    continue;
                }
                let key = (
                    (c.x / TAU).round() as i64,
                    (c.y / TAU).round() as i64,
                    (a / TAU).round() as i64,
                );
                if seen.insert(key) {
                    out.push(HexCircumscription::from_solution(pts, c, a, sides));
                }
            }
        }
    }
    out.sort_by(|x, y| {
        x.hexagon
            .apothem
            .total_cmp(&y.hexagon.apothem)
            .then(x.hexagon.center.x.total_cmp(&y.hexagon.center.x))
            .then(x.hexagon.center.y.total_cmp(&y.hexagon.center.y))
    });
    out
}

/// Cramer solve of `n_s·c + a = n_s·p` for the three points.
fn solve_assignment(pts: &[Point; 3], sides: [usize; 3]) -> Option<(Point, f64)> {
    let rows = sides.map(|s| HEX_NORMALS[s]);
    let m = [
        [rows[0].x, rows[0].y, 1.0],
        [rows[1].x, rows[1].y, 1.0],
        [rows[2].x, rows[2].y, 1.0],
    ];
    let det = det3(&m);
    if det.abs() < 1e-12 {
        return None;
    }
    let rhs = [rows[0].dot(pts[0]), rows[1].dot(pts[1]), rows[2].dot(pts[2])];
    let col = |k: usize| {
        let mut mk = m;
        for r in 0..3 {
            mk[r][k] = rhs[r];
        }
        det3(&mk) / det
    };
    Some((Point::new(col(0), col(1)), col(2)))
}

/// Returns the first circumhexagon of the triple with no point of
/// `all_points` strictly inside.
pub fn empty_circumhexagon(
    p1: Point,
    p2: Point,
    p3: Point,
    all_points: &[Point],
) -> (bool, Option<HexCircumscription>) {
    // The triple itself sits on the boundary, so it never counts as inside.
    match circumhexagons_through(p1, p2, p3)
        .into_iter()
        .find(|h| h.is_empty_of(all_points, TAU))
    {
        Some(h) => (true, Some(h)),
        None => (false, None),
    }
}

/// Homothets of a general convex shape through three points, in the order
/// produced by its counterclockwise side assignments.
pub fn shape_circumscriptions(shape: &ConvexShape, p1: Point, p2: Point, p3: Point) -> Vec<ShapeFit> {
    let pts = if orient(p1, p2, p3) >= 0.0 {
        [p1, p2, p3]
    } else {
        [p1, p3, p2]
    };
    let mut out = Vec::new();
    shape.fits_ccw(pts, TAU, &mut out);
    out
}

/// Smallest hexagon containing every point.
///
/// Solves `min a` subject to `n_k·c + a ≥ n_k·p` by trying every basis of
/// three constraints. Ties are broken by center coordinates.
pub fn min_enclosing_hexagon(points: &[Point]) -> ScaledHexagon {
    assert!(!points.is_empty(), "min_enclosing_hexagon needs at least one point");
    if points.len() == 1 {
        return ScaledHexagon::new(points[0], 0.0);
    }
    let cons: Vec<(Point, f64)> = points
        .iter()
        .flat_map(|&p| HEX_NORMALS.iter().map(move |&n| (n, n.dot(p))))
        .collect();
    let feasible = |c: Point, a: f64| {
        cons.iter()
            .all(|&(n, b)| n.dot(c) + a >= b - 10.0 * f64::EPSILON * (1.0 + b.abs()) - 1e-12)
    };
    let mut best: Option<(f64, Point)> = None;
    let m = cons.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let (ni, nj, nk) = (cons[i].0, cons[j].0, cons[k].0);
                let mat = [[ni.x, ni.y, 1.0], [nj.x, nj.y, 1.0], [nk.x, nk.y, 1.0]];
                let det = det3(&mat);
                if det.abs() < 1e-12 {
                    continue;
                }
                let rhs = [cons[i].1, cons[j].1, cons[k].1];
                let col = |q: usize| {
                    let mut mq = mat;
                    for r in 0..3 {
                        mq[r][q] = rhs[r];
                    }
                    det3(&mq) / det
                };
                let (c, a) = (Point::new(col(0), col(1)), col(2));
                if a < -TAU || !feasible(c, a) {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((ba, bc)) => {
                        a < ba - 1e-15
                            || ((a - ba).abs() <= 1e-15 && (c.x, c.y) < (bc.x, bc.y))
                    }
                };
                if better {
                    best = Some((a, c));
                }
            }
        }
    }
    let (a, c) = best.expect("a bounded LP over a nonempty point set has a vertex optimum");
    ScaledHexagon::new(c, a.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{HexSymmetry, Vertex, INV_SQRT3};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: Point, b: Point, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn unit_hexagon_from_w_e_ne() {
        let hs = circumhexagons_through(
            Point::new(-1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 1.5 * INV_SQRT3),
        );
        let h = hs
            .iter()
            .find(|h| close(h.hexagon.center, Point::ORIGIN, 1e-9) && (h.hexagon.apothem - 1.0).abs() < 1e-9)
            .expect("unit hexagon");
        assert_eq!(
            h.contacts,
            [
                SideLocation::OnSide(Side::W),
                SideLocation::OnSide(Side::E),
                SideLocation::OnSide(Side::NE)
            ]
        );
    }

    #[test]
    fn vertical_triple_only_fits_one_side() {
        // Collinear points can only share the W or E side.
        let hs = circumhexagons_through(Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(0.0, 2.5));
        for h in &hs {
            assert!(
                h.contacts.iter().all(|c| c.touches(Side::W)) || h.contacts.iter().all(|c| c.touches(Side::E))
            );
        }
    }

    #[test]
    fn three_point_set_is_empty() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.2), Point::new(0.3, 0.9)];
        assert!(empty_circumhexagon(pts[0], pts[1], pts[2], &pts).0);
    }

    #[test]
    fn blocked_triple() {
        let (a, b, c) = (Point::new(0.0, 0.0), Point::new(1.0, 0.2), Point::new(0.3, 0.9));
        let hs = circumhexagons_through(a, b, c);
        assert!(!hs.is_empty());
        // A point near the shared core of every circumhexagon blocks them all.
        let mut pts = vec![a, b, c];
        for h in &hs {
            pts.push(h.hexagon.center);
        }
        assert!(!empty_circumhexagon(a, b, c, &pts).0);
    }

    #[test]
    fn min_enclosing_single_point_and_vertices() {
        let p = Point::new(0.4, -0.7);
        let h = min_enclosing_hexagon(&[p]);
        assert_eq!(h.apothem, 0.0);
        assert_eq!(h.center, p);
        let unit = ScaledHexagon::new(Point::ORIGIN, 1.0);
        let vs: Vec<Point> = unit.vertices().iter().map(|v| v.1).collect();
        let h = min_enclosing_hexagon(&vs);
        assert!(close(h.center, Point::ORIGIN, 1e-12));
        assert!((h.apothem - 1.0).abs() < 1e-12);
    }

    #[test]
    fn min_enclosing_is_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let pts: Vec<Point> = (0..4).map(|_| Point::new(rng.gen(), rng.gen())).collect();
            let h = min_enclosing_hexagon(&pts);
            assert!(pts.iter().all(|&p| h.contains(p, TAU)));
            let shrunk = ScaledHexagon::new(h.center, h.apothem - 10.0 * TAU);
            assert!(pts.iter().any(|&p| !shrunk.contains(p, 0.0)));
        }
    }

    fn point_on_side(h: &ScaledHexagon, side: Side, t: f64) -> Point {
        let (a, b) = side.endpoints();
        let (pa, pb) = (h.vertex(a), h.vertex(b));
        pa + (pb - pa) * t
    }

    proptest! {
        #[test]
        fn round_trip(cx in -2.0..2.0f64, cy in -2.0..2.0f64, a in 0.1..3.0f64,
                      s in 0usize..6, gap1 in 1usize..5, gap2 in 1usize..5,
                      t1 in 0.05..0.95f64, t2 in 0.05..0.95f64, t3 in 0.05..0.95f64) {
            prop_assume!(gap1 + gap2 < 6);
            let h = ScaledHexagon::new(Point::new(cx, cy), a);
            let sides = [s, (s + gap1) % 6, (s + gap1 + gap2) % 6];
            let pts = [
                point_on_side(&h, Side::from_label(sides[0]), t1),
                point_on_side(&h, Side::from_label(sides[1]), t2),
                point_on_side(&h, Side::from_label(sides[2]), t3),
            ];
            // Three points on parallel sides pairs admit a family; skip those.
            prop_assume!(!(gap1 == 3 || gap2 == 3 || gap1 + gap2 == 3));
            let hs = circumhexagons_through(pts[0], pts[1], pts[2]);
            prop_assert!(hs.iter().any(|c| close(c.hexagon.center, h.center, 1e-8)
                && (c.hexagon.apothem - a).abs() < 1e-8));
        }

        #[test]
        fn equivariance(x1 in -1.0..1.0f64, y1 in -1.0..1.0f64, x2 in -1.0..1.0f64,
                        y2 in -1.0..1.0f64, x3 in -1.0..1.0f64, y3 in -1.0..1.0f64,
                        lam in 0.2..5.0f64, dx in -3.0..3.0f64, dy in -3.0..3.0f64) {
            let p = [Point::new(x1, y1), Point::new(x2, y2), Point::new(x3, y3)];
            prop_assume!(orient(p[0], p[1], p[2]).abs() > 1e-3);
            let base = circumhexagons_through(p[0], p[1], p[2]);

            let scaled = circumhexagons_through(p[0] * lam, p[1] * lam, p[2] * lam);
            prop_assert_eq!(base.len(), scaled.len());
            for (b, s) in base.iter().zip(&scaled) {
                prop_assert!(close(b.hexagon.center * lam, s.hexagon.center, 1e-8 * lam));
                prop_assert!((b.hexagon.apothem * lam - s.hexagon.apothem).abs() < 1e-8 * lam);
            }

            let d = Point::new(dx, dy);
            let moved = circumhexagons_through(p[0] + d, p[1] + d, p[2] + d);
            prop_assert_eq!(base.len(), moved.len());
            for (b, m) in base.iter().zip(&moved) {
                prop_assert!(close(b.hexagon.center + d, m.hexagon.center, 1e-8));
                prop_assert!((b.hexagon.apothem - m.hexagon.apothem).abs() < 1e-8);
            }

            let rot = HexSymmetry::new(1, false);
            let turned = circumhexagons_through(rot.apply(p[0]), rot.apply(p[1]), rot.apply(p[2]));
            prop_assert_eq!(base.len(), turned.len());
            for b in &base {
                let c = rot.apply(b.hexagon.center);
                prop_assert!(turned.iter().any(|t| close(t.hexagon.center, c, 1e-8)
                    && (t.hexagon.apothem - b.hexagon.apothem).abs() < 1e-8));
            }
        }

        #[test]
        fn every_solution_passes_self_check(x1 in 0.0..1.0f64, y1 in 0.0..1.0f64,
                                            x2 in 0.0..1.0f64, y2 in 0.0..1.0f64,
                                            x3 in 0.0..1.0f64, y3 in 0.0..1.0f64) {
            let p = [Point::new(x1, y1), Point::new(x2, y2), Point::new(x3, y3)];
            prop_assume!(orient(p[0], p[1], p[2]).abs() > 1e-6);
            for h in circumhexagons_through(p[0], p[1], p[2]) {
                for q in p {
                    prop_assert!((h.hexagon.norm_of(q) - h.hexagon.apothem).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn generic_hexagon_shape_matches() {
        let hex = ConvexShape::hexagon();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p: Vec<Point> = (0..3).map(|_| Point::new(rng.gen(), rng.gen())).collect();
            if orient(p[0], p[1], p[2]).abs() < 1e-6 {
                continue;
            }
            let fits = shape_circumscriptions(&hex, p[0], p[1], p[2]);
            let direct = circumhexagons_through(p[0], p[1], p[2]);
            for f in &fits {
                assert!(direct
                    .iter()
                    .any(|d| close(d.hexagon.center, f.center, 1e-9) && (d.hexagon.apothem - f.scale).abs() < 1e-9));
            }
            for d in &direct {
                assert!(fits
                    .iter()
                    .any(|f| close(d.hexagon.center, f.center, 1e-9) && (d.hexagon.apothem - f.scale).abs() < 1e-9));
            }
        }
    }

    #[test]
    fn vertex_contact_is_recorded() {
        let h = ScaledHexagon::new(Point::ORIGIN, 1.0);
        // SW vertex, E side, middle of the NW side
        let pts = [h.vertex(Vertex::SW), Point::new(1.0, 0.1), Point::new(-0.5, INV_SQRT3 * 1.5)];
        let hs = circumhexagons_through(pts[0], pts[1], pts[2]);
        let found = hs
            .iter()
            .find(|c| close(c.hexagon.center, Point::ORIGIN, 1e-9))
            .expect("unit hexagon");
        assert_eq!(found.contacts[0], SideLocation::OnVertex(Vertex::SW));
    }
}
