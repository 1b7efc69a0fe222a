//! Empty-homothet Delaunay triangulations by exhaustive triple enumeration.
//!
//! A triple of sites is a triangle when some homothet of the shape has all
//! three on its boundary and no site strictly inside. The triangles found are
//! then assembled and checked to form an embedded triangulated region. That
//! region can miss thin pockets along the convex hull, and it can fall apart
//! into pieces joined by bridge edges that lie on no triangle.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circumscription::{circumhexagons_through, shape_circumscriptions};
use crate::geom::{orient, Point, TAU};
use crate::shape::{ConvexShape, ShapeFit, ShapeKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationKind {
    FourCoHexagonal,
    TwoOnSideDirection,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    pub violations: Vec<Violation>,
}

impl GeneralPositionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DelaunayError {
    #[error("at least 3 points are required, got {0}")]
    TooFewPoints(usize),
    #[error("general position violated ({} violations)", .0.violations.len())]
    GeneralPosition(GeneralPositionReport),
    #[error("general position violated: edge ({0}, {1}) borders more than two triangles")]
    NonManifold(usize, usize),
    #[error("general position violated: triangles do not form an embedded region ({0})")]
    HullNotCovered(String),
}

/// A triangulation with counterclockwise triangles and edge adjacency.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(from = "RawTriangulation", into = "RawTriangulation")]
pub struct Triangulation {
    pub points: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    /// Delaunay edges on no triangle, `(a, b)` with `a < b`, sorted.
    pub bridges: Vec<(usize, usize)>,
    pub shape: ShapeKind,
    /// Directed edge `(a, b)` to the triangle having it counterclockwise.
    half_edges: HashMap<(usize, usize), usize>,
    neighbors: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawTriangulation {
    points: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    bridges: Vec<(usize, usize)>,
    shape: ShapeKind,
}

impl From<RawTriangulation> for Triangulation {
    fn from(r: RawTriangulation) -> Self {
        Triangulation::from_parts(r.points, r.triangles, r.shape).with_bridges(r.bridges)
    }
}

impl From<Triangulation> for RawTriangulation {
    fn from(t: Triangulation) -> Self {
        RawTriangulation {
            points: t.points,
            triangles: t.triangles,
            bridges: t.bridges,
            shape: t.shape,
        }
    }
}

impl Triangulation {
    /// Builds adjacency for the given triangles. Later duplicates of a
    /// directed edge overwrite earlier ones; [`validate_structure`] reports them.
    pub fn from_parts(points: Vec<Point>, triangles: Vec<[usize; 3]>, shape: ShapeKind) -> Self {
        let mut half_edges = HashMap::with_capacity(triangles.len() * 3);
        let mut nb: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); points.len()];
        for (ti, t) in triangles.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                half_edges.insert((a, b), ti);
                nb[a].insert(b);
                nb[b].insert(a);
            }
        }
        Triangulation {
            points,
            triangles,
            bridges: Vec::new(),
            shape,
            half_edges,
            neighbors: nb.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// Adds edges that belong to no triangle.
    pub fn with_bridges(mut self, bridges: Vec<(usize, usize)>) -> Self {
        for &(a, b) in &bridges {
            for (u, v) in [(a, b), (b, a)] {
                if let Err(at) = self.neighbors[u].binary_search(&v) {
                    self.neighbors[u].insert(at, v);
                }
            }
        }
        self.bridges = bridges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        self.bridges.sort_unstable();
        self.bridges.dedup();
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.half_edges.contains_key(&(a, b))
            || self.half_edges.contains_key(&(b, a))
            || self.bridges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Triangle having the directed edge `a → b` in counterclockwise order,
    /// i.e. the triangle to the left of `a → b`.
    pub fn left_triangle(&self, a: usize, b: usize) -> Option<usize> {
        self.half_edges.get(&(a, b)).copied()
    }

    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .half_edges
            .keys()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .chain(self.bridges.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Copy with every point mapped by `f`. Pass `reverses_orientation` for
    /// reflections so triangles stay counterclockwise.
    pub fn transformed(&self, f: impl Fn(Point) -> Point, reverses_orientation: bool) -> Triangulation {
        let points = self.points.iter().map(|&p| f(p)).collect();
        let triangles = self
            .triangles
            .iter()
            .map(|&[a, b, c]| if reverses_orientation { [a, c, b] } else { [a, b, c] })
            .collect();
        Triangulation::from_parts(points, triangles, self.shape).with_bridges(self.bridges.clone())
    }
}

/// Result of one exhaustive pass over all triples.
#[derive(Clone, Debug, Default)]
struct Enumeration {
    triangles: Vec<[usize; 3]>,
    cohexagonal: Vec<[usize; 4]>,
}

/// Rotates a counterclockwise triple so the smallest index comes first.
fn canonical(t: [usize; 3]) -> [usize; 3] {
    let m = (0..3).min_by_key(|&i| t[i]).unwrap_or(0);
    [t[m], t[(m + 1) % 3], t[(m + 2) % 3]]
}

fn horizontal_reach(shape: &ConvexShape) -> f64 {
    shape
        .corners(Point::ORIGIN, 1.0)
        .iter()
        .fold(0.0f64, |m, c| m.max(c.x.abs()))
}

fn enumerate(points: &[Point], shape: &ConvexShape) -> Enumeration {
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x).then(a.cmp(&b)));
    let xs: Vec<f64> = order.iter().map(|&i| points[i].x).collect();
    let reach = horizontal_reach(shape);

    let per_first: Vec<Enumeration> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = Enumeration::default();
            let mut fits: Vec<ShapeFit> = Vec::with_capacity(8);
            for j in i + 1..n {
                for k in j + 1..n {
                    let o = orient(points[i], points[j], points[k]);
                    if o.abs() <= TAU * TAU {
                        continue;
                    }
                    let tri = if o > 0.0 { [i, j, k] } else { [i, k, j] };
                    fits.clear();
                    shape.fits_ccw(tri.map(|v| points[v]), TAU, &mut fits);
                    let mut found = false;
                    for fit in &fits {
                        let lo = fit.center.x - fit.scale * reach - TAU;
                        let hi = fit.center.x + fit.scale * reach + TAU;
                        let start = xs.partition_point(|&x| x < lo);
                        let end = xs.partition_point(|&x| x <= hi);
                        let mut empty = true;
                        let mut on_boundary: Vec<usize> = Vec::new();
                        for &q in &order[start..end] {
                            if q == i || q == j || q == k {
                                continue;
                            }
                            let g = shape.gauge(points[q] - fit.center);
                            if g < fit.scale - TAU {
                                empty = false;
                                break;
                            }
                            if g <= fit.scale + TAU {
                                on_boundary.push(q);
                            }
                        }
                        if !empty {
                            continue;
                        }
                        found = true;
                        for q in on_boundary {
                            let mut four = [i, j, k, q];
                            four.sort_unstable();
                            local.cohexagonal.push(four);
                        }
                    }
                    if found {
                        local.triangles.push(canonical(tri));
                    }
                }
            }
            local
        })
        .collect();

    let mut all = Enumeration::default();
    for part in per_first {
        all.triangles.extend(part.triangles);
        all.cohexagonal.extend(part.cohexagonal);
    }
    all.triangles.sort_unstable();
    all.cohexagonal.sort_unstable();
    all.cohexagonal.dedup();
    all
}

/// Pairs that lie on one side of an empty homothet.
///
/// A homothet whose side contains `p` and `q` contains the homothet having
/// `[pq]` as that full side (shrink about a point of the side), so only that
/// one needs testing, on both sides of the line.
fn side_direction_pairs(points: &[Point], shape: &ConvexShape) -> Vec<Violation> {
    let corners = shape.corners(Point::ORIGIN, 1.0);
    let k = shape.side_count();
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (p, q) = (points[i], points[j]);
            let d = q - p;
            let len = d.norm();
            let shared = len == 0.0
                || (0..k).any(|side| {
                    if (shape.normals()[side].dot(d) / len).abs() > TAU {
                        return false;
                    }
                    let (c0, c1) = (corners[(side + k - 1) % k], corners[side]);
                    let unit = c1 - c0;
                    let scale = len / unit.norm();
                    let start = if unit.dot(d) > 0.0 { p } else { q };
                    let center = start - c0 * scale;
                    points.iter().enumerate().all(|(r, &x)| {
                        r == i || r == j || shape.gauge(x - center) >= scale - TAU
                    })
                });
            if shared {
                out.push(Violation {
                    kind: ViolationKind::TwoOnSideDirection,
                    indices: vec![i, j],
                });
            }
        }
    }
    out
}

fn report_from(points: &[Point], shape: &ConvexShape, en: &Enumeration) -> GeneralPositionReport {
    let mut violations = side_direction_pairs(points, shape);
    violations.extend(en.cohexagonal.iter().map(|q| Violation {
        kind: ViolationKind::FourCoHexagonal,
        indices: q.to_vec(),
    }));
    violations.sort();
    GeneralPositionReport { violations }
}

/// Flags pairs on one side of an empty hexagon and four points on the
/// boundary of a common empty hexagon.
pub fn check_general_position(points: &[Point]) -> GeneralPositionReport {
    check_general_position_for(points, &ConvexShape::hexagon())
}

pub fn check_general_position_for(points: &[Point], shape: &ConvexShape) -> GeneralPositionReport {
    let en = if points.len() >= 3 {
        enumerate(points, shape)
    } else {
        Enumeration::default()
    };
    report_from(points, shape, &en)
}

pub fn build_hexagon_delaunay(points: &[Point]) -> Result<Triangulation, DelaunayError> {
    build_shape_delaunay(points, &ConvexShape::hexagon())
}

/// Builds the empty-homothet triangulation for `shape`. Refuses input that is
/// not in general position for that shape.
pub fn build_shape_delaunay(points: &[Point], shape: &ConvexShape) -> Result<Triangulation, DelaunayError> {
    if points.len() < 3 {
        return Err(DelaunayError::TooFewPoints(points.len()));
    }
    let en = enumerate(points, shape);
    let report = report_from(points, shape, &en);
    if !report.is_clean() {
        return Err(DelaunayError::GeneralPosition(report));
    }
    let t = Triangulation::from_parts(points.to_vec(), en.triangles, shape.kind());
    let bridges = find_bridges(&t, shape);
    let t = t.with_bridges(bridges);
    validate_structure(&t)?;
    Ok(t)
}

/// Connected components of the triangle edges, as a label per site.
fn triangle_components(t: &Triangulation) -> Vec<usize> {
    let n = t.points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for tri in &t.triangles {
        for e in 0..3 {
            let (a, b) = (root(&mut parent, tri[e]), root(&mut parent, tri[(e + 1) % 3]));
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..n).map(|v| root(&mut parent, v)).collect()
}

/// Delaunay edges between different triangle components. In general position
/// every bounded face of the Delaunay graph is a triangle, so an edge on no
/// triangle joins two pieces that are otherwise apart.
fn find_bridges(t: &Triangulation, shape: &ConvexShape) -> Vec<(usize, usize)> {
    let comp = triangle_components(t);
    if comp.iter().all(|&c| c == comp[0]) {
        return Vec::new();
    }
    let n = t.points.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let comp = &comp;
            (a + 1..n)
                .filter(move |&b| comp[a] != comp[b] && has_two_point_homothet(&t.points, shape, a, b))
                .map(move |b| (a, b))
        })
        .collect()
}

/// Whether some homothet has `points[a]` and `points[b]` on its boundary and
/// no other site strictly inside.
///
/// With `a` on side `i` and `b` on side `j`, the homothets `(c, λ)` form a
/// line in `(c_x, c_y, λ)`. Along it, keeping both points inside is an
/// interval, and each other site is strictly inside on an open interval.
pub fn has_two_point_homothet(points: &[Point], shape: &ConvexShape, a: usize, b: usize) -> bool {
    let (pa, pb) = (points[a], points[b]);
    let (nrm, off) = (shape.normals(), shape.offsets());
    let k = shape.side_count();
    let row = |s: usize| [nrm[s].x, nrm[s].y, off[s]];
    for i in 0..k {
        for j in 0..k {
            let (r1, r2) = (row(i), row(j));
            let d = [
                r1[1] * r2[2] - r1[2] * r2[1],
                r1[2] * r2[0] - r1[0] * r2[2],
                r1[0] * r2[1] - r1[1] * r2[0],
            ];
            let dn = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if dn < 1e-12 {
                continue;
            }
            let d = d.map(|v| v / dn);
            // Minimum-norm solution of the two side equations.
            let (h1, h2) = (nrm[i].dot(pa), nrm[j].dot(pb));
            let dot = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
            let (g11, g12, g22) = (dot(r1, r1), dot(r1, r2), dot(r2, r2));
            let det = g11 * g22 - g12 * g12;
            let (w1, w2) = ((g22 * h1 - g12 * h2) / det, (g11 * h2 - g12 * h1) / det);
            let z0 = [0, 1, 2].map(|m| w1 * r1[m] + w2 * r2[m]);
            // Slack of site x against side s along the line: α + β t, with
            // x strictly inside the side when negative.
            let slack = |x: Point, s: usize| {
                let r = row(s);
                (nrm[s].dot(x) - dot(r, z0), -dot(r, d))
            };
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            let mut clip = |alpha: f64, beta: f64, bound: f64| {
                // α + β t ≤ bound
                if beta.abs() < 1e-15 {
                    if alpha > bound {
                        lo = f64::INFINITY;
                    }
                } else if beta > 0.0 {
                    hi = hi.min((bound - alpha) / beta);
                } else {
                    lo = lo.max((bound - alpha) / beta);
                }
            };
            // λ > 0 is −λ ≤ 0 with some room.
            clip(-z0[2], -d[2], -TAU);
            for s in 0..k {
                for x in [pa, pb] {
                    let (al, be) = slack(x, s);
                    clip(al, be, TAU);
                }
            }
            if !(lo < hi) {
                continue;
            }
            let mut inside: Vec<(f64, f64)> = Vec::new();
            for (r, &x) in points.iter().enumerate() {
                if r == a || r == b {
                    continue;
                }
                let (mut l, mut h) = (f64::NEG_INFINITY, f64::INFINITY);
                for s in 0..k {
                    let (al, be) = slack(x, s);
                    let bound = -TAU;
                    if be.abs() < 1e-15 {
                        if al >= bound {
                            l = f64::INFINITY;
                        }
                    } else if be > 0.0 {
                        h = h.min((bound - al) / be);
                    } else {
                        l = l.max((bound - al) / be);
                    }
                }
                if l < h && h > lo && l < hi {
                    inside.push((l, h));
                }
            }
            inside.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut cur = lo;
            let mut gap = false;
            for (l, h) in inside {
                if l > cur + 1e-12 {
                    gap = true;
                    break;
                }
                cur = cur.max(h);
                if cur >= hi {
                    break;
                }
            }
            if gap || cur + 1e-12 < hi {
                return true;
            }
        }
    }
    false
}

/// Convex hull vertices in counterclockwise order, keeping points that lie on
/// hull edges.
pub fn convex_hull_with_collinear(points: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .x
            .total_cmp(&points[b].x)
            .then(points[a].y.total_cmp(&points[b].y))
    });
    if idx.len() < 3 {
        return idx;
    }
    let scale = points
        .iter()
        .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
        .max(1.0);
    let eps = 1e-12 * scale * scale;
    let chain = |iter: &mut dyn Iterator<Item = usize>| {
        let mut h: Vec<usize> = Vec::new();
        for i in iter {
            while h.len() >= 2 && orient(points[h[h.len() - 2]], points[h[h.len() - 1]], points[i]) < -eps {
                h.pop();
            }
            h.push(i);
        }
        h
    };
    let mut lower = chain(&mut idx.iter().copied());
    let mut upper = chain(&mut idx.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Structure of the triangulated region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub boundary_edges: usize,
    pub hull_vertices: usize,
    /// Convex hull edges that are not triangulation edges. Empty-homothet
    /// triangulations may leave pockets between a hull edge and the sites
    /// just inside it.
    pub missing_hull_edges: Vec<(usize, usize)>,
}

/// Checks that the triangles and bridges form an embedded connected region:
/// all triangles counterclockwise, every edge on at most two triangles, every
/// site used, full angle around interior vertices, a boundary without
/// crossings that passes through every hull vertex, and
/// `T = 2n − 2B − b − 2` for `b` boundary edges and `B` bridges.
pub fn validate_structure(t: &Triangulation) -> Result<RegionReport, DelaunayError> {
    let pts = &t.points;
    let n = pts.len();
    let fail = |m: String| Err(DelaunayError::HullNotCovered(m));
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    let mut angle = vec![0.0f64; n];
    for tri in &t.triangles {
        if tri.iter().any(|&v| v >= n) {
            return fail("vertex index out of range".into());
        }
        if orient(pts[tri[0]], pts[tri[1]], pts[tri[2]]) <= 0.0 {
            return fail(format!("triangle {tri:?} is not counterclockwise"));
        }
        for e in 0..3 {
            let (a, b, c) = (tri[e], tri[(e + 1) % 3], tri[(e + 2) % 3]);
            let c_ = directed.entry((a, b)).or_insert(0);
            *c_ += 1;
            if *c_ > 1 {
                return Err(DelaunayError::NonManifold(a.min(b), a.max(b)));
            }
            let (u, v) = (pts[b] - pts[a], pts[c] - pts[a]);
            angle[a] += u.cross(v).atan2(u.dot(v));
        }
    }
    let boundary: Vec<(usize, usize)> = {
        let mut b: Vec<(usize, usize)> = directed
            .keys()
            .filter(|&&(a, b)| !directed.contains_key(&(b, a)))
            .copied()
            .collect();
        b.sort_unstable();
        b
    };
    let mut used = vec![false; n];
    let mut on_boundary = vec![false; n];
    for tri in &t.triangles {
        for &v in tri {
            used[v] = true;
        }
    }
    for &(a, b) in &t.bridges {
        if a >= n || b >= n || a == b {
            return fail(format!("bad bridge ({a}, {b})"));
        }
        if directed.contains_key(&(a, b)) || directed.contains_key(&(b, a)) {
            return fail(format!("bridge ({a}, {b}) is a triangle edge"));
        }
        used[a] = true;
        used[b] = true;
    }
    for &(a, b) in boundary.iter().chain(&t.bridges) {
        on_boundary[a] = true;
        on_boundary[b] = true;
    }
    if let Some(v) = used.iter().position(|u| !u) {
        return fail(format!("point {v} is not a triangle vertex"));
    }
    let full = std::f64::consts::TAU;
    for v in 0..n {
        if on_boundary[v] {
            if angle[v] > full + 1e-9 {
                return fail(format!("triangles overlap around boundary vertex {v}"));
            }
        } else if (angle[v] - full).abs() > 1e-9 {
            return fail(format!("angle sum {} around interior vertex {v}", angle[v]));
        }
    }
    let outline: Vec<(usize, usize)> = boundary.iter().chain(&t.bridges).copied().collect();
    for (i, &(a, b)) in outline.iter().enumerate() {
        for &(c, d) in &outline[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let (p, q, r, s) = (pts[a], pts[b], pts[c], pts[d]);
            if orient(p, q, r) * orient(p, q, s) < 0.0 && orient(r, s, p) * orient(r, s, q) < 0.0 {
                return fail(format!("boundary edges ({a},{b}) and ({c},{d}) cross"));
            }
        }
    }
    let hull = convex_hull_with_collinear(pts);
    if let Some(&v) = hull.iter().find(|&&v| !on_boundary[v]) {
        return fail(format!("hull vertex {v} is not on the region boundary"));
    }
    let bridges = t.bridges.len();
    if t.triangles.len() + 2 * bridges + boundary.len() + 2 != 2 * n {
        return fail(format!(
            "{} triangles with {} boundary edges and {bridges} bridges; expected 2n - 2B - b - 2 = {}",
            t.triangles.len(),
            boundary.len(),
            (2 * n).saturating_sub(2 * bridges + boundary.len() + 2)
        ));
    }
    let missing_hull_edges = (0..hull.len())
        .map(|i| (hull[i], hull[(i + 1) % hull.len()]))
        .filter(|e| !directed.contains_key(e))
        .collect();
    Ok(RegionReport {
        boundary_edges: boundary.len(),
        hull_vertices: hull.len(),
        missing_hull_edges,
    })
}

/// Structural checks plus an independent emptiness check of every triangle.
pub fn validate_delaunay(t: &Triangulation) -> bool {
    validate_delaunay_for(t, &ConvexShape::of_kind(t.shape))
}

pub fn validate_delaunay_for(t: &Triangulation, shape: &ConvexShape) -> bool {
    if validate_structure(t).is_err() {
        return false;
    }
    t.triangles.iter().all(|tri| {
        let [a, b, c] = tri.map(|v| t.points[v]);
        if shape.kind() == ShapeKind::Hexagon {
            circumhexagons_through(a, b, c).iter().any(|h| h.is_empty_of(&t.points, TAU))
        } else {
            shape_circumscriptions(shape, a, b, c).iter().any(|f| {
                t.points
                    .iter()
                    .all(|&q| shape.gauge(q - f.center) >= f.scale - TAU)
            })
        }
    })
}

/// Brute-force reference: every triple, every circumhexagon from the
/// 216-case solver, every point.
pub fn oracle_hexagon_triangles(points: &[Point]) -> Vec<[usize; 3]> {
    let n = points.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let o = orient(points[i], points[j], points[k]);
                if o.abs() <= TAU * TAU {
                    continue;
                }
                let empty = circumhexagons_through(points[i], points[j], points[k])
                    .iter()
                    .any(|h| h.is_empty_of(points, TAU));
                if empty {
                    out.push(canonical(if o > 0.0 { [i, j, k] } else { [i, k, j] }));
                }
            }
        }
    }
    out.sort_unstable();
    out
}
