//! Fixed-orientation convex polygons given by outward side normals.
//!
//! A homothet with center `c` and scale `a` is `{ p : n_k·(p − c) ≤ h_k·a }`.
//! For the regular shapes used here every offset `h_k` is 1, so the scale is
//! the apothem.

use serde::{Deserialize, Serialize};

use crate::geom::{Point, HEX_NORMALS, SQRT3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Hexagon,
    Square,
    Triangle,
    Custom,
}

impl std::str::FromStr for ShapeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hexagon" => Ok(ShapeKind::Hexagon),
            "square" => Ok(ShapeKind::Square),
            "triangle" => Ok(ShapeKind::Triangle),
            other => Err(format!("unknown shape '{other}' (expected hexagon, square or triangle)")),
        }
    }
}

/// One side assignment of three counterclockwise boundary points, with the
/// inverse of its constraint matrix.
#[derive(Clone, Debug)]
struct Assignment {
    sides: [usize; 3],
    inv: [[f64; 3]; 3],
}

/// A homothet of a shape passing through three points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShapeFit {
    pub center: Point,
    pub scale: f64,
    pub sides: [usize; 3],
}

#[derive(Clone, Debug)]
pub struct ConvexShape {
    kind: ShapeKind,
    normals: Vec<Point>,
    offsets: Vec<f64>,
    cyclic: Vec<Assignment>,
}

impl ConvexShape {
    /// Builds a shape from outward unit normals sorted counterclockwise by
    /// angle, with positive support offsets.
    pub fn from_normals(kind: ShapeKind, normals: Vec<Point>, offsets: Vec<f64>) -> Self {
        assert_eq!(normals.len(), offsets.len());
        assert!(normals.len() >= 3);
        let k = normals.len();
        let mut cyclic = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if !is_ccw_cyclic(a, b, c, k) {
                        continue;
                    }
                    let m = [
                        [normals[a].x, normals[a].y, offsets[a]],
                        [normals[b].x, normals[b].y, offsets[b]],
                        [normals[c].x, normals[c].y, offsets[c]],
                    ];
                    if let Some(inv) = invert3(&m) {
                        cyclic.push(Assignment {
                            sides: [a, b, c],
                            inv,
                        });
                    }
                }
            }
        }
        ConvexShape {
            kind,
            normals,
            offsets,
            cyclic,
        }
    }

    pub fn hexagon() -> Self {
        ConvexShape::from_normals(ShapeKind::Hexagon, HEX_NORMALS.to_vec(), vec![1.0; 6])
    }

    /// Axis-parallel square; the scale is half the side length.
    pub fn square() -> Self {
        ConvexShape::from_normals(
            ShapeKind::Square,
            vec![
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
                Point::new(-1.0, 0.0),
                Point::new(0.0, -1.0),
            ],
            vec![1.0; 4],
        )
    }

    /// Equilateral triangle with a horizontal bottom side; the scale is the
    /// inradius.
    pub fn triangle() -> Self {
        ConvexShape::from_normals(
            ShapeKind::Triangle,
            vec![
                Point::new(SQRT3 / 2.0, 0.5),
                Point::new(-SQRT3 / 2.0, 0.5),
                Point::new(0.0, -1.0),
            ],
            vec![1.0; 3],
        )
    }

    /// Regular `k`-gon whose first side normal points at `phase` radians.
    pub fn regular(k: usize, phase: f64) -> Self {
        let normals = (0..k)
            .map(|i| {
                let t = phase + std::f64::consts::TAU * i as f64 / k as f64;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        ConvexShape::from_normals(ShapeKind::Custom, normals, vec![1.0; k])
    }

    pub fn of_kind(kind: ShapeKind) -> Self {
        match kind {
            ShapeKind::Hexagon | ShapeKind::Custom => ConvexShape::hexagon(),
            ShapeKind::Square => ConvexShape::square(),
            ShapeKind::Triangle => ConvexShape::triangle(),
        }
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn side_count(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// Smallest scale of a homothet centred at the origin containing `v`.
    #[inline]
    pub fn gauge(&self, v: Point) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, h)| n.dot(v) / h)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Corners of the homothet `(center, scale)`, counterclockwise, starting
    /// with the corner between side 0 and side 1.
    pub fn corners(&self, center: Point, scale: f64) -> Vec<Point> {
        let k = self.side_count();
        (0..k)
            .map(|i| {
                let j = (i + 1) % k;
                let (n1, n2) = (self.normals[i], self.normals[j]);
                let det = n1.cross(n2);
                let (b1, b2) = (self.offsets[i] * scale, self.offsets[j] * scale);
                center + Point::new((b1 * n2.y - b2 * n1.y) / det, (n1.x * b2 - n2.x * b1) / det)
            })
            .collect()
    }

    /// All homothets with `a`, `b`, `c` (counterclockwise) on their boundary.
    ///
    /// Only side assignments in counterclockwise cyclic order can place three
    /// counterclockwise points on a convex boundary, so the rest are skipped.
    /// Duplicates produced by points at corners are not removed.
    pub fn fits_ccw(&self, pts: [Point; 3], tol: f64, out: &mut Vec<ShapeFit>) {
        for asg in &self.cyclic {
            let rhs = [
                self.normals[asg.sides[0]].dot(pts[0]),
                self.normals[asg.sides[1]].dot(pts[1]),
                self.normals[asg.sides[2]].dot(pts[2]),
            ];
            let sol = mul3(&asg.inv, &rhs);
            let scale = sol[2];
            if scale <= tol {
                continue;
            }
            let center = Point::new(sol[0], sol[1]);
            let k = self.side_count();
            let ok = (0..3).all(|r| {
                let s = asg.sides[r];
                let v = pts[r] - center;
                let prev = (s + k - 1) % k;
                let next = (s + 1) % k;
                self.normals[prev].dot(v) <= self.offsets[prev] * scale + tol
                    && self.normals[next].dot(v) <= self.offsets[next] * scale + tol
            });
            if ok {
                out.push(ShapeFit {
                    center,
                    scale,
                    sides: asg.sides,
                });
            }
        }
    }
}

fn is_ccw_cyclic(a: usize, b: usize, c: usize, k: usize) -> bool {
    if a == b || b == c || a == c {
        return false;
    }
    let db = (b + k - a) % k;
    let dc = (c + k - a) % k;
    db < dc
}

pub(crate) fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = det3(m);
    if det.abs() < 1e-12 {
        return None;
    }
    let inv_det = 1.0 / det;
    let mut inv = [[0.0; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            // cofactor of m[j][i]
            let r0 = (j + 1) % 3;
            let r1 = (j + 2) % 3;
            let c0 = (i + 1) % 3;
            let c1 = (i + 2) % 3;
            *cell = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) * inv_det;
        }
    }
    Some(inv)
}

pub(crate) fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[inline]
pub(crate) fn mul3(m: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{hexagon_norm, TAU};

    #[test]
    fn hexagon_gauge_matches_closed_form() {
        let hex = ConvexShape::hexagon();
        for i in 0..50 {
            let t = i as f64 * 0.41;
            let v = Point::new(t.cos() * (1.0 + i as f64 * 0.1), t.sin());
            assert!((hex.gauge(v) - hexagon_norm(v)).abs() < 1e-14);
        }
    }

    #[test]
    fn cyclic_assignment_counts() {
        assert_eq!(ConvexShape::hexagon().cyclic.len(), 60);
        assert_eq!(ConvexShape::square().cyclic.len(), 12);
        assert_eq!(ConvexShape::triangle().cyclic.len(), 3);
    }

    #[test]
    fn inverse_is_inverse() {
        let m = [[1.0, 2.0, 0.5], [-0.3, 1.0, 1.0], [0.2, -1.0, 1.0]];
        let inv = invert3(&m).unwrap();
        for i in 0..3 {
            let mut e = [0.0; 3];
            e[i] = 1.0;
            let x = mul3(&inv, &e);
            let back = mul3(&m, &x);
            for j in 0..3 {
                assert!((back[j] - e[j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn corners_lie_on_two_sides() {
        for shape in [ConvexShape::hexagon(), ConvexShape::square(), ConvexShape::triangle()] {
            let c = Point::new(0.3, -0.2);
            for p in shape.corners(c, 1.7) {
                assert!((shape.gauge(p - c) - 1.7).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fits_recover_a_known_square() {
        let sq = ConvexShape::square();
        // right, top, left sides of the square centred at (1, 1) with scale 2
        let pts = [Point::new(3.0, 0.5), Point::new(1.5, 3.0), Point::new(-1.0, 2.0)];
        let mut out = Vec::new();
        sq.fits_ccw(pts, TAU, &mut out);
        assert!(out
            .iter()
            .any(|f| (f.center - Point::new(1.0, 1.0)).norm() < 1e-12 && (f.scale - 2.0).abs() < 1e-12));
    }
}
