//! The triangles crossed by a segment `[st]`, their upper and lower chains,
//! induction points, gentle edges and paths, standard sections and canonical
//! gentle paths.
//!
//! Everything is computed in the frame returned by [`normalize_pair`]: `s` at
//! the origin and `t` in the positive quadrant with slope in `[0, 1/√3]`.
//! Triangles are numbered `1..=n` and chain labels `0..=n`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circumscription::{circumhexagons_through, HexCircumscription};
use crate::delaunay::Triangulation;
use crate::geom::{normalize_pair, orient, GeomError, HexSymmetry, Point, Side, SideLocation, INV_SQRT3, SQRT3, TAU};
use crate::spanner::{dijkstra, ShortestPaths, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("point {0} lies on the open segment; split the pair at it")]
    PointOnSegment(usize),
    #[error("the segment passes through vertex {0}")]
    DegenerateCrossing(usize),
    #[error("the segment leaves the triangulated region after {0} triangles")]
    LeavesRegion(usize),
    #[error("triangle {0:?} has no empty circumscribing hexagon")]
    NoEmptyHexagon([usize; 3]),
    #[error("section ({0}, {1}) is out of range")]
    BadSection(usize, usize),
    #[error("section ({0}, {1}) contains no gentle path")]
    NoGentlePath(usize, usize),
}

/// Left, right and base vertices of one walk triangle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Roles {
    pub base: Option<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Left and right induction points of one walk triangle.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Induction {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WalkDecomposition {
    pub s: usize,
    pub t: usize,
    pub symmetry: HexSymmetry,
    /// All sites, translated so `s` is the origin and then mapped by `symmetry`.
    pub points: Vec<Point>,
    /// Triangle ids in the source triangulation, `T_1..T_n`.
    pub tri_seq: Vec<usize>,
    /// Vertex triples of `T_1..T_n`, counterclockwise in the walk frame.
    pub triangles: Vec<[usize; 3]>,
    /// `u_0..u_n`.
    pub upper: Vec<usize>,
    /// `l_0..l_n`.
    pub lower: Vec<usize>,
    pub roles: Vec<Roles>,
    /// `H_1..H_n`.
    pub hexes: Vec<HexCircumscription>,
    /// Number of empty circumhexagons found for each triangle.
    pub hex_multiplicity: Vec<usize>,
    pub induction: Vec<Induction>,
    /// Parameter along `[st]` where the edge `(u_i, l_i)` is crossed, `i = 1..n-1`.
    pub crossings: Vec<f64>,
}

impl WalkDecomposition {
    pub fn n(&self) -> usize {
        self.triangles.len()
    }

    /// Vertices of `T_k`, `1 ≤ k ≤ n`.
    pub fn tri(&self, k: usize) -> [usize; 3] {
        self.triangles[k - 1]
    }

    /// `H_k`, `1 ≤ k ≤ n`.
    pub fn hex(&self, k: usize) -> &HexCircumscription {
        &self.hexes[k - 1]
    }

    pub fn roles_of(&self, k: usize) -> &Roles {
        &self.roles[k - 1]
    }

    pub fn induction_of(&self, k: usize) -> &Induction {
        &self.induction[k - 1]
    }

    pub fn point(&self, v: usize) -> Point {
        self.points[v]
    }

    /// Where vertex `v` sits on `H_k`.
    pub fn location(&self, k: usize, v: usize) -> SideLocation {
        self.hex(k).hexagon.locate(self.points[v], TAU)
    }

    /// True when `v` lies on the closed `side` of `H_k`.
    pub fn touches(&self, k: usize, v: usize, side: Side) -> bool {
        self.location(k, v).touches(side)
    }

    /// Above `[st]` in the walk frame (the half-plane containing `(−1, 1)`).
    pub fn is_above(&self, v: usize) -> bool {
        orient(Point::ORIGIN, self.points[self.t], self.points[v]) > 0.0
    }

    /// Distinct vertices of `T_i..T_j`, sorted.
    pub fn section_vertices(&self, i: usize, j: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = (i..=j).flat_map(|k| self.tri(k)).collect();
        set.into_iter().collect()
    }

    /// Distinct vertices labelled `u_{i-1}..u_j`.
    pub fn section_upper(&self, i: usize, j: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.upper[i - 1..=j].iter().copied().collect();
        set.into_iter().collect()
    }

    /// Distinct vertices labelled `l_{i-1}..l_j`.
    pub fn section_lower(&self, i: usize, j: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.lower[i - 1..=j].iter().copied().collect();
        set.into_iter().collect()
    }

    /// Undirected edges of `T_i..T_j`, `(a, b)` with `a < b`, sorted.
    pub fn section_edges(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let mut set = BTreeSet::new();
        for k in i..=j {
            let tri = self.tri(k);
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        set.into_iter().collect()
    }

    /// The weighted graph of `T_i..T_j` over all sites (others isolated).
    pub fn section_graph(&self, i: usize, j: usize) -> WeightedGraph {
        WeightedGraph::from_edges(&self.points, self.section_edges(i, j))
    }

    fn check_section(&self, i: usize, j: usize) -> Result<(), WalkError> {
        if i == 0 || i > j || j > self.n() {
            return Err(WalkError::BadSection(i, j));
        }
        Ok(())
    }

    /// Relations 1–4 of the label order, as strict pairs `(a, b)` meaning
    /// `a < b`, before transitive closure. Labels are `(is_upper, index)`.
    pub fn label_order(&self) -> Vec<((bool, usize), (bool, usize))> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            out.push(((true, i), (true, i + 1)));
            out.push(((false, i), (false, i + 1)));
        }
        for i in 1..n {
            let (xu, xl) = (self.points[self.upper[i]].x, self.points[self.lower[i]].x);
            if xu < xl {
                out.push(((true, i), (false, i)));
            } else if xl < xu {
                out.push(((false, i), (true, i)));
            }
        }
        out
    }
}

/// Decomposes the walk from `s` to `t` across `tri`.
pub fn decompose(tri: &Triangulation, s: usize, t: usize) -> Result<WalkDecomposition, WalkError> {
    let sym = normalize_pair(tri.points[s], tri.points[t])?;
    let origin = tri.points[s];
    let points: Vec<Point> = tri.points.iter().map(|&p| sym.apply(p - origin)).collect();
    let flip = sym.is_reflection();
    // Counterclockwise triangles in the walk frame.
    let local = |id: usize| -> [usize; 3] {
        let [a, b, c] = tri.triangles[id];
        if flip {
            [a, c, b]
        } else {
            [a, b, c]
        }
    };
    let pt = points[t];
    let len = pt.norm();
    let side_of = |v: usize| orient(Point::ORIGIN, pt, points[v]) / len;
    let along = |v: usize| points[v].dot(pt) / (len * len);
    let on_line = |v: usize| -> Option<WalkError> {
        if v == s || v == t || side_of(v).abs() > TAU {
            return None;
        }
        let lam = along(v);
        Some(if lam > 0.0 && lam < 1.0 {
            WalkError::PointOnSegment(v)
        } else {
            WalkError::DegenerateCrossing(v)
        })
    };

    let mut tri_seq = Vec::new();
    let mut upper = vec![s];
    let mut lower = vec![s];
    let mut crossings = Vec::new();

    // The edge (s, t) itself: a single triangle on either side.
    let find_left = |a: usize, b: usize| {
        if flip {
            tri.left_triangle(b, a)
        } else {
            tri.left_triangle(a, b)
        }
    };
    if tri.has_edge(s, t) {
        let id = find_left(s, t).or_else(|| find_left(t, s)).ok_or(WalkError::LeavesRegion(0))?;
        tri_seq.push(id);
        upper.push(t);
        lower.push(t);
    } else {
        // T_1: the triangle at s whose angle contains the direction of t.
        let mut first = None;
        for (id, _) in tri.triangles.iter().enumerate() {
            let l = local(id);
            let Some(r) = l.iter().position(|&v| v == s) else {
                continue;
            };
            let (a, b) = (l[(r + 1) % 3], l[(r + 2) % 3]);
            for v in [a, b] {
                if points[v].dot(pt) > 0.0 {
                    if let Some(e) = on_line(v) {
                        return Err(e);
                    }
                }
            }
            if orient(Point::ORIGIN, points[a], pt) > 0.0 && orient(Point::ORIGIN, pt, points[b]) > 0.0 {
                first = Some((id, b, a));
                break;
            }
        }
        let (id, mut u, mut l) = first.ok_or(WalkError::LeavesRegion(0))?;
        tri_seq.push(id);
        upper.push(u);
        lower.push(l);
        crossings.push(cross_param(&points, pt, u, l));
        loop {
            let next = find_left(u, l).ok_or(WalkError::LeavesRegion(tri_seq.len()))?;
            let lt = local(next);
            let c = lt.iter().copied().find(|&v| v != u && v != l).unwrap_or(u);
            tri_seq.push(next);
            if c == t {
                upper.push(t);
                lower.push(t);
                break;
            }
            if let Some(e) = on_line(c) {
                return Err(e);
            }
            if side_of(c) > 0.0 {
                u = c;
            } else {
                l = c;
            }
            upper.push(u);
            lower.push(l);
            let lam = cross_param(&points, pt, u, l);
            if lam <= *crossings.last().unwrap_or(&0.0) || tri_seq.len() > tri.triangles.len() {
                return Err(WalkError::DegenerateCrossing(c));
            }
            crossings.push(lam);
        }
    }

    let triangles: Vec<[usize; 3]> = tri_seq.iter().map(|&id| local(id)).collect();
    let mut hexes = Vec::with_capacity(triangles.len());
    let mut hex_multiplicity = Vec::with_capacity(triangles.len());
    for tr in &triangles {
        let [a, b, c] = tr.map(|v| points[v]);
        let empty: Vec<HexCircumscription> = circumhexagons_through(a, b, c)
            .into_iter()
            .filter(|h| h.is_empty_of(&points, TAU))
            .collect();
        let first = *empty.first().ok_or(WalkError::NoEmptyHexagon(*tr))?;
        hex_multiplicity.push(empty.len());
        hexes.push(first);
    }

    let mut walk = WalkDecomposition {
        s,
        t,
        symmetry: sym,
        points,
        tri_seq,
        triangles,
        upper,
        lower,
        roles: Vec::new(),
        hexes,
        hex_multiplicity,
        induction: Vec::new(),
        crossings,
    };
    walk.roles = (1..=walk.n()).map(|k| roles_for(&walk, k)).collect();
    walk.induction = (1..=walk.n())
        .map(|k| {
            let r = walk.roles_of(k);
            let left = if k == 1 {
                vec![s]
            } else {
                r.left.iter().copied().filter(|&v| walk.touches(k, v, Side::W)).collect()
            };
            let right = if k == walk.n() {
                vec![t]
            } else {
                r.right.iter().copied().filter(|&v| walk.touches(k, v, Side::E)).collect()
            };
            Induction { left, right }
        })
        .collect();
    Ok(walk)
}

fn cross_param(points: &[Point], pt: Point, u: usize, l: usize) -> f64 {
    let (pu, pl) = (points[u], points[l]);
    let e = pl - pu;
    pu.cross(e) / pt.cross(e)
}

fn roles_for(w: &WalkDecomposition, k: usize) -> Roles {
    let n = w.n();
    let (u, l) = (&w.upper, &w.lower);
    if n == 1 {
        Roles {
            base: None,
            left: vec![w.s],
            right: vec![w.t],
        }
    } else if k == 1 {
        Roles {
            base: None,
            left: vec![w.s],
            right: vec![u[1], l[1]],
        }
    } else if k == n {
        Roles {
            base: None,
            left: vec![u[n - 1], l[n - 1]],
            right: vec![w.t],
        }
    } else if u[k] == u[k - 1] {
        Roles {
            base: Some(u[k]),
            left: vec![l[k - 1]],
            right: vec![l[k]],
        }
    } else {
        Roles {
            base: Some(l[k]),
            left: vec![u[k - 1]],
            right: vec![u[k]],
        }
    }
}

/// Slope test: `|slope(a, b)| ≤ 1/√3`.
pub fn is_gentle_edge(a: Point, b: Point) -> bool {
    (b.y - a.y).abs() <= (b.x - a.x).abs() * INV_SQRT3 + TAU
}

/// `√3·d_x(u, l) − (y(u) − y(l))`.
pub fn gentle_threshold(u: Point, l: Point) -> f64 {
    SQRT3 * (u.x - l.x).abs() - (u.y - l.y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GentlePath {
    pub upper: usize,
    pub lower: usize,
    pub path: Vec<usize>,
    pub length: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GentleReport {
    pub gentle_edges: Vec<(usize, usize)>,
    pub short_gentle_edges: Vec<(usize, usize)>,
    pub gentle_paths: Vec<GentlePath>,
}

impl GentleReport {
    pub fn has_gentle_edge(&self) -> bool {
        !self.gentle_edges.is_empty()
    }

    pub fn has_gentle_path(&self) -> bool {
        !self.gentle_paths.is_empty()
    }

    /// True when `v` ends some gentle path.
    pub fn ends_gentle_path(&self, v: usize) -> bool {
        self.gentle_paths.iter().any(|g| g.upper == v || g.lower == v)
    }
}

/// Distances within a section from each of its vertices.
pub struct SectionDistances {
    pub sources: Vec<usize>,
    pub paths: Vec<ShortestPaths>,
}

impl SectionDistances {
    pub fn new(walk: &WalkDecomposition, i: usize, j: usize) -> Self {
        let g = walk.section_graph(i, j);
        let sources = walk.section_vertices(i, j);
        let paths = sources.iter().map(|&v| dijkstra(&g, v)).collect();
        SectionDistances { sources, paths }
    }

    pub fn from(&self, v: usize) -> &ShortestPaths {
        let k = self.sources.binary_search(&v).expect("vertex outside the section");
        &self.paths[k]
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.from(a).dist[b]
    }
}

/// The gentle edges, short gentle edges and gentle paths of `T_i..T_j`.
pub fn find_gentle(walk: &WalkDecomposition, i: usize, j: usize) -> Result<GentleReport, WalkError> {
    walk.check_section(i, j)?;
    let dist = SectionDistances::new(walk, i, j);
    Ok(gentle_with(walk, i, j, &dist))
}

/// [`find_gentle`] with section distances already computed.
pub fn gentle_with(walk: &WalkDecomposition, i: usize, j: usize, dist: &SectionDistances) -> GentleReport {
    let ups = walk.section_upper(i, j);
    let lows = walk.section_lower(i, j);
    let p = &walk.points;
    let mut gentle_edges = Vec::new();
    for (a, b) in walk.section_edges(i, j) {
        let ul = (ups.contains(&a) && lows.contains(&b)) || (ups.contains(&b) && lows.contains(&a));
        if ul && is_gentle_edge(p[a], p[b]) {
            gentle_edges.push((a, b));
        }
    }
    let short: BTreeSet<(usize, usize)> = short_gentle_candidates(walk, i, j).into_iter().collect();
    let short_gentle_edges = gentle_edges.iter().copied().filter(|e| short.contains(e)).collect();
    let mut gentle_paths = Vec::new();
    for &u in &ups {
        let sp = dist.from(u);
        for &l in &lows {
            if u == l {
                continue;
            }
            let threshold = gentle_threshold(p[u], p[l]);
            let length = sp.dist[l];
            if length <= threshold + TAU {
                gentle_paths.push(GentlePath {
                    upper: u,
                    lower: l,
                    path: sp.path_to(l).unwrap_or_default(),
                    length,
                    threshold,
                });
            }
        }
    }
    GentleReport {
        gentle_edges,
        short_gentle_edges,
        gentle_paths,
    }
}

/// Gentle paths of `T_i..T_j` that use `p` or `q` in a role its labels do
/// not give it: both are taken as upper and lower points, the way `s` and
/// `t` are for the whole walk.
pub fn endpoint_gentle_paths(
    walk: &WalkDecomposition,
    i: usize,
    j: usize,
    p: usize,
    q: usize,
    dist: &SectionDistances,
) -> Vec<GentlePath> {
    let ups = walk.section_upper(i, j);
    let lows = walk.section_lower(i, j);
    let mut ext_ups = ups.clone();
    let mut ext_lows = lows.clone();
    for v in [p, q] {
        if !ext_ups.contains(&v) {
            ext_ups.push(v);
        }
        if !ext_lows.contains(&v) {
            ext_lows.push(v);
        }
    }
    let pts = &walk.points;
    let mut out = Vec::new();
    for &u in &ext_ups {
        let sp = dist.from(u);
        for &l in &ext_lows {
            if u == l || (ups.contains(&u) && lows.contains(&l)) {
                continue;
            }
            let threshold = gentle_threshold(pts[u], pts[l]);
            let length = sp.dist[l];
            if length <= threshold + TAU {
                out.push(GentlePath {
                    upper: u,
                    lower: l,
                    path: sp.path_to(l).unwrap_or_default(),
                    length,
                    threshold,
                });
            }
        }
    }
    out
}

/// Edges named by the short-edge conditions within `T_i..T_j`, normalized
/// to `(min, max)`.
fn short_gentle_candidates(walk: &WalkDecomposition, i: usize, j: usize) -> Vec<(usize, usize)> {
    lemma_short_edges(walk)
        .into_iter()
        .filter(|c| c.hex >= i && c.hex <= j)
        .map(|c| (c.edge.0.min(c.edge.1), c.edge.0.max(c.edge.1)))
        .collect()
}

/// One instance of the short-edge conditions: a chain vertex on a named side
/// of `H_hex`, and the edge that must then be gentle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortEdgeCase {
    pub hex: usize,
    pub side: Side,
    pub vertex: usize,
    pub edge: (usize, usize),
}

/// All short-edge conditions that apply on this walk: `u_i` on the SW side
/// of `H_{i+1}`, `l_i` on the NW side of `H_{i+1}`, `u_i` on the SE side of
/// `H_i`, `l_i` on the NE side of `H_i`.
pub fn lemma_short_edges(walk: &WalkDecomposition) -> Vec<ShortEdgeCase> {
    let n = walk.n();
    let (u, l) = (&walk.upper, &walk.lower);
    let mut out = Vec::new();
    for i in 0..n {
        if u[i] != l[i + 1] && walk.touches(i + 1, u[i], Side::SW) {
            out.push(ShortEdgeCase {
                hex: i + 1,
                side: Side::SW,
                vertex: u[i],
                edge: (u[i], l[i + 1]),
            });
        }
        if l[i] != u[i + 1] && walk.touches(i + 1, l[i], Side::NW) {
            out.push(ShortEdgeCase {
                hex: i + 1,
                side: Side::NW,
                vertex: l[i],
                edge: (l[i], u[i + 1]),
            });
        }
    }
    for i in 1..=n {
        // At i = n both labels are t; its partner is the other chain's l_{n-1} or u_{n-1}.
        let (lo, up) = if i == n { (l[n - 1], u[n - 1]) } else { (l[i], u[i]) };
        if u[i] != lo && walk.touches(i, u[i], Side::SE) {
            out.push(ShortEdgeCase {
                hex: i,
                side: Side::SE,
                vertex: u[i],
                edge: (u[i], lo),
            });
        }
        if l[i] != up && walk.touches(i, l[i], Side::NE) {
            out.push(ShortEdgeCase {
                hex: i,
                side: Side::NE,
                vertex: l[i],
                edge: (up, l[i]),
            });
        }
    }
    out
}

/// Short-edge conditions whose edge fails the slope test (should be none).
pub fn check_short_edges(walk: &WalkDecomposition) -> (usize, Vec<ShortEdgeCase>) {
    let cases = lemma_short_edges(walk);
    let bad = cases
        .iter()
        .copied()
        .filter(|c| !is_gentle_edge(walk.points[c.edge.0], walk.points[c.edge.1]))
        .collect();
    (cases.len(), bad)
}

/// Left vertex of `T_i` is a left induction point, right vertex of `T_j` is
/// a right induction point, and neither base vertex ends a gentle path in the
/// section.
///
/// `T_n` (for `n > 1`) has two left vertices and `T_1` two right ones. One of
/// them must be the induction point and the other is held to the base vertex
/// condition.
pub fn is_standard(walk: &WalkDecomposition, i: usize, j: usize, gentle: &GentleReport) -> bool {
    let (ri, rj) = (walk.roles_of(i), walk.roles_of(j));
    let (li, rj_ind) = (&walk.induction_of(i).left, &walk.induction_of(j).right);
    if li.is_empty() || rj_ind.is_empty() {
        return false;
    }
    let mut bases: Vec<usize> = ri.base.into_iter().chain(rj.base).collect();
    if ri.left.len() == 2 {
        bases.extend(ri.left.iter().copied().filter(|v| !li.contains(v)));
    }
    if rj.right.len() == 2 {
        bases.extend(rj.right.iter().copied().filter(|v| !rj_ind.contains(v)));
    }
    bases.iter().all(|&b| !gentle.ends_gentle_path(b))
}

/// A gentle path whose endpoints meet the canonical conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalPath {
    /// The endpoint with the smaller abscissa.
    pub first: usize,
    pub second: usize,
    pub path: GentlePath,
    /// No single edge of the section extends it into a longer gentle path.
    pub maximal: bool,
}

/// Vertices allowed to start a canonical path in `T_i..T_j`.
pub fn canonical_starts(walk: &WalkDecomposition, i: usize, j: usize) -> BTreeSet<usize> {
    let mut out: BTreeSet<usize> = walk.induction_of(i).left.iter().copied().collect();
    for k in i..=j {
        out.extend(walk.induction_of(k).right.iter().copied());
    }
    out
}

/// Vertices allowed to end a canonical path in `T_i..T_j`.
pub fn canonical_ends(walk: &WalkDecomposition, i: usize, j: usize) -> BTreeSet<usize> {
    let mut out: BTreeSet<usize> = walk.induction_of(j).right.iter().copied().collect();
    for k in i..=j {
        out.extend(walk.induction_of(k).left.iter().copied());
    }
    out
}

fn ordered(walk: &WalkDecomposition, a: usize, b: usize) -> (usize, usize) {
    let (pa, pb) = (walk.points[a], walk.points[b]);
    if (pa.x, a) <= (pb.x, b) {
        (a, b)
    } else {
        (b, a)
    }
}

/// The canonical gentle path of largest horizontal extent in a standard
/// section, searched over every pair of canonical endpoints.
pub fn find_canonical_gentle_path(
    walk: &WalkDecomposition,
    i: usize,
    j: usize,
) -> Result<Option<CanonicalPath>, WalkError> {
    walk.check_section(i, j)?;
    let dist = SectionDistances::new(walk, i, j);
    let gentle = gentle_with(walk, i, j, &dist);
    if !gentle.has_gentle_path() {
        return Err(WalkError::NoGentlePath(i, j));
    }
    let starts = canonical_starts(walk, i, j);
    let ends = canonical_ends(walk, i, j);
    let mut best: Option<CanonicalPath> = None;
    for g in &gentle.gentle_paths {
        let (first, second) = ordered(walk, g.upper, g.lower);
        if !starts.contains(&first) || !ends.contains(&second) {
            continue;
        }
        let span = walk.points[second].x - walk.points[first].x;
        let better = match &best {
            None => true,
            Some(b) => span > walk.points[b.second].x - walk.points[b.first].x + TAU,
        };
        if better {
            best = Some(CanonicalPath {
                first,
                second,
                path: g.clone(),
                maximal: is_maximal(walk, i, j, g),
            });
        }
    }
    Ok(best)
}

/// No section edge at either end of `g` yields a gentle path with the new
/// endpoint replacing the old one.
fn is_maximal(walk: &WalkDecomposition, i: usize, j: usize, g: &GentlePath) -> bool {
    let ups = walk.section_upper(i, j);
    let lows = walk.section_lower(i, j);
    let p = &walk.points;
    let edges = walk.section_edges(i, j);
    let nb = |v: usize| -> Vec<usize> {
        edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    };
    for w in nb(g.upper) {
        if ups.contains(&w) && w != g.lower && !g.path.contains(&w) {
            let len = g.length + p[w].dist(p[g.upper]);
            if len <= gentle_threshold(p[w], p[g.lower]) + TAU {
                return false;
            }
        }
    }
    for w in nb(g.lower) {
        if lows.contains(&w) && w != g.upper && !g.path.contains(&w) {
            let len = g.length + p[w].dist(p[g.lower]);
            if len <= gentle_threshold(p[g.upper], p[w]) + TAU {
                return false;
            }
        }
    }
    true
}

/// Canonical gentle paths of a standard section, and which gentle paths
/// extend to one through shortest section paths at both ends.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub gentle_paths: usize,
    /// Gentle paths whose endpoints are already canonical.
    pub canonical: usize,
    pub extended: usize,
    /// `(upper, lower)` endpoints of gentle paths with no direct extension.
    /// Expected when a short gentle edge is involved.
    pub unextended: Vec<(usize, usize)>,
}

impl ExtensionReport {
    /// The section has a gentle path and hence must have a canonical one.
    pub fn holds(&self) -> bool {
        self.gentle_paths == 0 || self.canonical > 0
    }
}

/// Counts canonical gentle paths, and for each gentle path `a → b` (by
/// abscissa) searches for canonical endpoints `p′, q′` such that
/// `p′ → a → b → q′`, joined by shortest section paths, is gentle.
pub fn check_canonical_extension(
    walk: &WalkDecomposition,
    i: usize,
    j: usize,
    dist: &SectionDistances,
    gentle: &GentleReport,
) -> ExtensionReport {
    let ups: BTreeSet<usize> = walk.section_upper(i, j).into_iter().collect();
    let lows: BTreeSet<usize> = walk.section_lower(i, j).into_iter().collect();
    let starts = canonical_starts(walk, i, j);
    let ends = canonical_ends(walk, i, j);
    let p = &walk.points;
    let mut rep = ExtensionReport {
        gentle_paths: gentle.gentle_paths.len(),
        ..Default::default()
    };
    for g in &gentle.gentle_paths {
        let (a, b) = ordered(walk, g.upper, g.lower);
        if starts.contains(&a) && ends.contains(&b) {
            rep.canonical += 1;
        }
        let mut found = false;
        'outer: for &ps in &starts {
            let da = if ps == a { 0.0 } else { dist.dist(ps, a) };
            for &qe in &ends {
                if qe == ps {
                    continue;
                }
                let db = if qe == b { 0.0 } else { dist.dist(b, qe) };
                let len = da + g.length + db;
                let thr = [(ps, qe), (qe, ps)]
                    .into_iter()
                    .filter(|(x, y)| ups.contains(x) && lows.contains(y))
                    .map(|(x, y)| gentle_threshold(p[x], p[y]))
                    .fold(f64::NEG_INFINITY, f64::max);
                if len <= thr + TAU {
                    found = true;
                    break 'outer;
                }
            }
        }
        if found {
            rep.extended += 1;
        } else {
            rep.unextended.push((g.upper, g.lower));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::lower_bound_family;
    use crate::delaunay::build_hexagon_delaunay;
    use crate::shape::ShapeKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_instance(seed: u64, n: usize) -> Triangulation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Point> = (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect();
        build_hexagon_delaunay(&pts).unwrap()
    }

    #[test]
    fn single_triangle_walk() {
        let t = Triangulation::from_parts(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 0.2), Point::new(0.4, 0.9)],
            vec![[0, 1, 2]],
            ShapeKind::Hexagon,
        );
        let w = decompose(&t, 0, 1).unwrap();
        assert_eq!(w.n(), 1);
        assert_eq!(w.upper, vec![0, 1]);
        assert_eq!(w.lower, vec![0, 1]);
        assert_eq!(w.roles_of(1).left, vec![0]);
        assert_eq!(w.roles_of(1).right, vec![1]);
    }

    #[test]
    fn family_k2_walk() {
        let f = lower_bound_family(2);
        let t = build_hexagon_delaunay(&f.points).unwrap();
        let w = decompose(&t, f.p(0), f.q(2)).unwrap();
        assert_eq!(w.n(), 4);
        // In the walk frame p_0 stays at the origin with q_2 at slope 1/√3;
        // the p chain is above and the q chain below.
        let ups: BTreeSet<usize> = w.upper.iter().copied().collect();
        let lows: BTreeSet<usize> = w.lower.iter().copied().collect();
        assert_eq!(ups, [f.p(0), f.p(1), f.p(2), f.q(2)].into_iter().collect());
        assert_eq!(lows, [f.p(0), f.q(0), f.q(1), f.q(2)].into_iter().collect());
        // Base vertices alternate between the chains.
        let bases: Vec<usize> = (2..4).map(|k| w.roles_of(k).base.unwrap()).collect();
        assert_ne!(w.upper.contains(&bases[0]), w.upper.contains(&bases[1]));
    }

    #[test]
    fn chains_are_one_sided_and_alternate() {
        for seed in 0..20 {
            let t = random_instance(seed, 25);
            for s in 0..t.len() {
                for tt in 0..t.len() {
                    if s == tt {
                        continue;
                    }
                    let Ok(w) = decompose(&t, s, tt) else {
                        continue;
                    };
                    let n = w.n();
                    for i in 1..n {
                        assert!(w.is_above(w.upper[i]));
                        assert!(!w.is_above(w.lower[i]));
                        assert!(w.crossings[i - 1] > 0.0 && w.crossings[i - 1] < 1.0);
                    }
                    for i in 2..n {
                        let same_u = w.upper[i] == w.upper[i - 1];
                        let same_l = w.lower[i] == w.lower[i - 1];
                        assert!(same_u ^ same_l, "seed {seed} pair {s},{tt} step {i}");
                    }
                    assert!(w.crossings.windows(2).all(|c| c[0] < c[1]));
                    for k in 1..=n {
                        let tri = w.tri(k);
                        assert!(orient(w.points[tri[0]], w.points[tri[1]], w.points[tri[2]]) > 0.0);
                        for v in tri {
                            assert!(w.location(k, v).is_on_boundary());
                        }
                    }
                    for k in 1..n {
                        let next = w.tri(k + 1);
                        assert!(next.contains(&w.upper[k]) && next.contains(&w.lower[k]));
                    }
                }
            }
        }
    }

    #[test]
    fn point_on_segment_is_reported() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.1),
            Point::new(1.0, 0.2),
            Point::new(0.45, 0.8),
            Point::new(0.55, -0.6),
        ];
        let t = build_hexagon_delaunay(&pts).unwrap();
        match decompose(&t, 0, 2) {
            Err(WalkError::PointOnSegment(1)) => {}
            // (0,1) and (1,2) may also be edges reached directly
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn slope_test_matches_threshold_on_single_edges() {
        for seed in 0..20 {
            let t = random_instance(100 + seed, 20);
            for s in 0..t.len() {
                for tt in (s + 1)..t.len() {
                    let Ok(w) = decompose(&t, s, tt) else {
                        continue;
                    };
                    let n = w.n();
                    let ups = w.section_upper(1, n);
                    let lows = w.section_lower(1, n);
                    for (a, b) in w.section_edges(1, n) {
                        for (u, l) in [(a, b), (b, a)] {
                            if u != l && ups.contains(&u) && lows.contains(&l) {
                                let (pu, pl) = (w.points[u], w.points[l]);
                                let by_len = pu.dist(pl) <= gentle_threshold(pu, pl) + TAU;
                                assert_eq!(by_len, is_gentle_edge(pu, pl), "seed {seed} {s}-{tt} edge {u},{l}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn short_edge_conditions_give_gentle_edges() {
        let mut cases = 0;
        for seed in 0..30 {
            let t = random_instance(200 + seed, 20);
            for s in 0..t.len() {
                for tt in 0..t.len() {
                    if s == tt {
                        continue;
                    }
                    let Ok(w) = decompose(&t, s, tt) else {
                        continue;
                    };
                    let (n, bad) = check_short_edges(&w);
                    cases += n;
                    assert!(bad.is_empty(), "{bad:?}");
                }
            }
        }
        assert!(cases > 100);
    }

    #[test]
    fn whole_walk_is_standard() {
        let t = random_instance(7, 30);
        for s in 0..t.len() {
            for tt in 0..t.len() {
                if s == tt {
                    continue;
                }
                let Ok(w) = decompose(&t, s, tt) else {
                    continue;
                };
                let g = find_gentle(&w, 1, w.n()).unwrap();
                assert!(is_standard(&w, 1, w.n(), &g));
            }
        }
    }

    #[test]
    fn canonical_extensions_exist() {
        let mut sections = 0;
        let mut direct = 0;
        for seed in 0..15 {
            let t = random_instance(300 + seed, 20);
            for s in 0..t.len() {
                for tt in 0..t.len() {
                    if s == tt {
                        continue;
                    }
                    let Ok(w) = decompose(&t, s, tt) else {
                        continue;
                    };
                    for i in 1..=w.n() {
                        for j in i..=w.n() {
                            let d = SectionDistances::new(&w, i, j);
                            let g = gentle_with(&w, i, j, &d);
                            if !g.has_gentle_path() || !is_standard(&w, i, j, &g) {
                                continue;
                            }
                            sections += 1;
                            let rep = check_canonical_extension(&w, i, j, &d, &g);
                            assert!(rep.holds(), "seed {seed} {s}-{tt} ({i},{j}) {rep:?}");
                            if rep.unextended.is_empty() {
                                direct += 1;
                            }
                            assert!(find_canonical_gentle_path(&w, i, j).unwrap().is_some());
                        }
                    }
                }
            }
        }
        assert!(sections >= 50);
        assert!(direct > sections / 2, "{direct} of {sections}");
    }

    #[test]
    fn family_rungs_against_slope_test() {
        for k in [1, 2, 5, 10] {
            let f = lower_bound_family(k);
            for i in 1..=k {
                let (a, b) = (f.points[f.p(i)], f.points[f.q(i - 1)]);
                let slope = (b.y - a.y) / (b.x - a.x);
                assert_eq!(is_gentle_edge(a, b), slope.abs() <= INV_SQRT3 + 1e-9, "k {k} i {i}");
            }
        }
    }

    #[test]
    fn label_order_has_chain_relations() {
        let f = lower_bound_family(3);
        let t = build_hexagon_delaunay(&f.points).unwrap();
        let w = decompose(&t, f.p(0), f.q(3)).unwrap();
        let rel = w.label_order();
        assert!(rel.len() >= 2 * w.n());
        assert!(rel.contains(&((true, 0), (true, 1))));
    }
}
