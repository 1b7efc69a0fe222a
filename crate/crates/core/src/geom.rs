//! Fixed-orientation hexagon primitives.
//!
//! The hexagon has its E and W sides parallel to the y-axis. Vertices are
//! named N, NE, SE, S, SW, NW (clockwise from the top) and sides carry the
//! integer labels 0..5 counterclockwise from the NW side.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Global geometric tolerance for coordinates of order one.
pub const TAU: f64 = 1e-9;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;
pub const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("coincident points")]
    CoincidentPoints,
    #[error("general position could not be reached after {attempts} rotations")]
    GeneralPositionUnreachable { attempts: usize },
    #[error("at least {needed} points are required, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Counterclockwise rotation by `angle` radians about `origin`.
    pub fn rotated_about(self, origin: Point, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        let v = self - origin;
        origin + Point::new(c * v.x - s * v.y, s * v.x + c * v.y)
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Orientation of the triple: positive when counterclockwise.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Hexagon sides, labelled counterclockwise from the NW side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    NW = 0,
    W = 1,
    SW = 2,
    SE = 3,
    E = 4,
    NE = 5,
}

impl Side {
    pub const ALL: [Side; 6] = [Side::NW, Side::W, Side::SW, Side::SE, Side::E, Side::NE];

    #[inline]
    pub fn label(self) -> usize {
        self as usize
    }

    pub fn from_label(label: usize) -> Side {
        Side::ALL[label % 6]
    }

    /// Outward unit normal. The normal of side `k` points at angle 120° + 60°·k.
    #[inline]
    pub fn normal(self) -> Point {
        HEX_NORMALS[self as usize]
    }

    /// Endpoints in counterclockwise order.
    pub fn endpoints(self) -> (Vertex, Vertex) {
        let k = self as usize;
        (SIDE_CCW_START[k], SIDE_CCW_START[(k + 1) % 6])
    }

    /// True for the three sides on the west half of the hexagon.
    pub fn is_west(self) -> bool {
        matches!(self, Side::NW | Side::W | Side::SW)
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::NW => "NW",
            Side::W => "W",
            Side::SW => "SW",
            Side::SE => "SE",
            Side::E => "E",
            Side::NE => "NE",
        }
    }
}

pub(crate) const HEX_NORMALS: [Point; 6] = [
    Point::new(-0.5, 0.866_025_403_784_438_6),
    Point::new(-1.0, 0.0),
    Point::new(-0.5, -0.866_025_403_784_438_6),
    Point::new(0.5, -0.866_025_403_784_438_6),
    Point::new(1.0, 0.0),
    Point::new(0.5, 0.866_025_403_784_438_6),
];

const SIDE_CCW_START: [Vertex; 6] = [
    Vertex::N,
    Vertex::NW,
    Vertex::SW,
    Vertex::S,
    Vertex::SE,
    Vertex::NE,
];

/// Hexagon vertices, clockwise from the top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vertex {
    N,
    NE,
    SE,
    S,
    SW,
    NW,
}

impl Vertex {
    pub const CLOCKWISE: [Vertex; 6] = [
        Vertex::N,
        Vertex::NE,
        Vertex::SE,
        Vertex::S,
        Vertex::SW,
        Vertex::NW,
    ];

    /// Offset from the center of the unit-apothem hexagon.
    pub fn unit_offset(self) -> Point {
        let r = 2.0 * INV_SQRT3;
        match self {
            Vertex::N => Point::new(0.0, r),
            Vertex::NE => Point::new(1.0, INV_SQRT3),
            Vertex::SE => Point::new(1.0, -INV_SQRT3),
            Vertex::S => Point::new(0.0, -r),
            Vertex::SW => Point::new(-1.0, -INV_SQRT3),
            Vertex::NW => Point::new(-1.0, INV_SQRT3),
        }
    }

    /// The vertex shared by side `k` and side `k + 1` (counterclockwise).
    pub fn between(side: Side) -> Vertex {
        SIDE_CCW_START[(side.label() + 1) % 6]
    }

    /// The two sides meeting at this vertex, in counterclockwise order.
    pub fn sides(self) -> (Side, Side) {
        match self {
            Vertex::NW => (Side::NW, Side::W),
            Vertex::SW => (Side::W, Side::SW),
            Vertex::S => (Side::SW, Side::SE),
            Vertex::SE => (Side::SE, Side::E),
            Vertex::NE => (Side::E, Side::NE),
            Vertex::N => (Side::NE, Side::NW),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Vertex::N => "N",
            Vertex::NE => "NE",
            Vertex::SE => "SE",
            Vertex::S => "S",
            Vertex::SW => "SW",
            Vertex::NW => "NW",
        }
    }
}

/// The hexagon gauge: the apothem of the smallest hexagon centred at the
/// origin with `v` on its boundary.
#[inline]
pub fn hexagon_norm(v: Point) -> f64 {
    let ax = v.x.abs();
    ax.max(0.5 * (ax + SQRT3 * v.y.abs()))
}

/// A homothet of the fixed-orientation regular hexagon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledHexagon {
    pub center: Point,
    /// Distance from the center to the E and W sides.
    pub apothem: f64,
}

impl ScaledHexagon {
    pub fn new(center: Point, apothem: f64) -> Self {
        debug_assert!(apothem >= 0.0);
        ScaledHexagon { center, apothem }
    }

    pub fn circumradius(&self) -> f64 {
        2.0 * self.apothem * INV_SQRT3
    }

    pub fn side_length(&self) -> f64 {
        self.circumradius()
    }

    pub fn vertex(&self, v: Vertex) -> Point {
        self.center + v.unit_offset() * self.apothem
    }

    /// The six vertices, clockwise from N.
    pub fn vertices(&self) -> [(Vertex, Point); 6] {
        Vertex::CLOCKWISE.map(|v| (v, self.vertex(v)))
    }

    /// Gauge distance of `p` from the center.
    #[inline]
    pub fn norm_of(&self, p: Point) -> f64 {
        hexagon_norm(p - self.center)
    }

    pub fn strictly_contains(&self, p: Point, tol: f64) -> bool {
        self.norm_of(p) < self.apothem - tol
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.norm_of(p) <= self.apothem + tol
    }

    /// Signed offset of `p` from the supporting line of `side` (positive outside).
    #[inline]
    pub fn side_slack(&self, side: Side, p: Point) -> f64 {
        side.normal().dot(p - self.center) - self.apothem
    }

    pub fn locate(&self, p: Point, tol: f64) -> SideLocation {
        locate(self, p, tol)
    }
}

/// Where a point sits relative to a hexagon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideLocation {
    Inside,
    Outside,
    OnSide(Side),
    OnVertex(Vertex),
}

impl SideLocation {
    pub fn is_on_boundary(self) -> bool {
        matches!(self, SideLocation::OnSide(_) | SideLocation::OnVertex(_))
    }

    /// True when the point lies on the closed segment of `side`.
    pub fn touches(self, side: Side) -> bool {
        match self {
            SideLocation::OnSide(s) => s == side,
            SideLocation::OnVertex(v) => {
                let (a, b) = v.sides();
                a == side || b == side
            }
            _ => false,
        }
    }
}

/// Classifies `p` against `h` at tolerance `tol`.
///
/// A point within `tol` of two side lines is reported as the vertex they
/// share. A point hexagon (apothem within `tol` of zero) containing `p`
/// reports `OnVertex(N)`.
pub fn locate(h: &ScaledHexagon, p: Point, tol: f64) -> SideLocation {
    let v = p - h.center;
    let g = hexagon_norm(v);
    if g < h.apothem - tol {
        return SideLocation::Inside;
    }
    if g > h.apothem + tol {
        return SideLocation::Outside;
    }
    let tight: Vec<Side> = Side::ALL
        .into_iter()
        .filter(|s| s.normal().dot(v) >= h.apothem - tol)
        .collect();
    match tight.as_slice() {
        [s] => SideLocation::OnSide(*s),
        [a, b] => {
            // (NW, NE) wraps around at N.
            let first = if (a.label() + 1) % 6 == b.label() { *a } else { *b };
            SideLocation::OnVertex(Vertex::between(first))
        }
        _ => SideLocation::OnVertex(Vertex::N),
    }
}

/// The six labelled vertices of `h`, clockwise from N.
pub fn hexagon_vertices(h: &ScaledHexagon) -> [(Vertex, Point); 6] {
    h.vertices()
}

/// An element of the 12-element symmetry group of the hexagon: a
/// counterclockwise rotation by a multiple of 60°, optionally followed by a
/// reflection across the horizontal axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct HexSymmetry {
    pub rotation_sixths: u8,
    pub reflect_x: bool,
}

impl HexSymmetry {
    pub const IDENTITY: HexSymmetry = HexSymmetry {
        rotation_sixths: 0,
        reflect_x: false,
    };

    pub fn new(rotation_sixths: u8, reflect_x: bool) -> Self {
        HexSymmetry {
            rotation_sixths: rotation_sixths % 6,
            reflect_x,
        }
    }

    /// All twelve symmetries: rotations 0..5 unreflected, then rotations
    /// 0..5 reflected.
    pub fn all() -> impl Iterator<Item = HexSymmetry> {
        [false, true]
            .into_iter()
            .flat_map(|r| (0..6u8).map(move |k| HexSymmetry::new(k, r)))
    }

    /// Applies the symmetry to a vector (fixing the origin).
    pub fn apply(&self, v: Point) -> Point {
        let (s, c) = ROT_SIXTHS[self.rotation_sixths as usize];
        let r = Point::new(c * v.x - s * v.y, s * v.x + c * v.y);
        if self.reflect_x {
            Point::new(r.x, -r.y)
        } else {
            r
        }
    }

    pub fn apply_about(&self, origin: Point, p: Point) -> Point {
        origin + self.apply(p - origin)
    }

    pub fn inverse(&self) -> HexSymmetry {
        if self.reflect_x {
            *self
        } else {
            HexSymmetry::new((6 - self.rotation_sixths) % 6, false)
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &HexSymmetry) -> HexSymmetry {
        // Reflection F satisfies F·R_k = R_{-k}·F.
        let (k1, f1) = (self.rotation_sixths, self.reflect_x);
        let (k2, f2) = (other.rotation_sixths, other.reflect_x);
        // self∘other = F^f1 R_k1 F^f2 R_k2
        let k = if f2 {
            (6 + k2 - k1) % 6
        } else {
            (k1 + k2) % 6
        };
        HexSymmetry::new(k, f1 ^ f2)
    }

    /// True when the symmetry reverses orientation.
    pub fn is_reflection(&self) -> bool {
        self.reflect_x
    }

    /// Image of a side label under the symmetry.
    pub fn map_side(&self, side: Side) -> Side {
        let rotated = (side.label() + self.rotation_sixths as usize) % 6;
        if self.reflect_x {
            Side::from_label((8 - rotated) % 6)
        } else {
            Side::from_label(rotated)
        }
    }
}

const ROT_SIXTHS: [(f64, f64); 6] = [
    (0.0, 1.0),
    (0.866_025_403_784_438_6, 0.5),
    (0.866_025_403_784_438_6, -0.5),
    (0.0, -1.0),
    (-0.866_025_403_784_438_6, -0.5),
    (-0.866_025_403_784_438_6, 0.5),
];

/// Finds the first symmetry (in [`HexSymmetry::all`] order) that maps `t`
/// into the closed positive quadrant around `s` with slope in `[0, 1/√3]`.
pub fn normalize_pair(s: Point, t: Point) -> Result<HexSymmetry, GeomError> {
    let d = t - s;
    let len = d.norm();
    if len <= TAU {
        return Err(GeomError::CoincidentPoints);
    }
    let eps = 1e-12 * len;
    HexSymmetry::all()
        .find(|sym| {
            let v = sym.apply(d);
            v.x > 0.0 && v.y >= -eps && v.y <= v.x * INV_SQRT3 + eps
        })
        .ok_or(GeomError::CoincidentPoints)
}

/// Maximum number of reseeded rotations tried by [`general_position_rotation`].
pub const MAX_ROTATION_ATTEMPTS: usize = 16;

/// Rotates the point set by a small seeded angle about its centroid until it
/// passes the general-position check. Returns the input unchanged with angle
/// 0 when it already passes.
pub fn general_position_rotation(
    points: &[Point],
    seed: u64,
) -> Result<(Vec<Point>, f64), GeomError> {
    general_position_rotation_for(points, seed, &crate::shape::ConvexShape::hexagon())
}

/// [`general_position_rotation`] against the general-position test of `shape`.
pub fn general_position_rotation_for(
    points: &[Point],
    seed: u64,
    shape: &crate::shape::ConvexShape,
) -> Result<(Vec<Point>, f64), GeomError> {
    use crate::delaunay::check_general_position_for;
    if points.len() < 2 {
        return Err(GeomError::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    if check_general_position_for(points, shape).is_clean() {
        return Ok((points.to_vec(), 0.0));
    }
    let n = points.len() as f64;
    let centroid = points
        .iter()
        .fold(Point::ORIGIN, |acc, &p| acc + p * (1.0 / n));
    for attempt in 0..MAX_ROTATION_ATTEMPTS {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let angle = loop {
            let a: f64 = rng.gen_range(0.0..std::f64::consts::PI / 180.0);
            if a > 0.0 {
                break a;
            }
        };
        let rotated: Vec<Point> = points
            .iter()
            .map(|p| p.rotated_about(centroid, angle))
            .collect();
        if check_general_position_for(&rotated, shape).is_clean() {
            return Ok((rotated, angle));
        }
    }
    Err(GeomError::GeneralPositionUnreachable {
        attempts: MAX_ROTATION_ATTEMPTS,
    })
}
