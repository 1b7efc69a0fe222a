//! Shortest paths with Euclidean weights and exact stretch factors.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::delaunay::Triangulation;
use crate::geom::{normalize_pair, Point, GeomError, SQRT3, TAU};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpannerError {
    #[error("internal error: graph is disconnected ({0} unreachable from {1})")]
    Disconnected(usize, usize),
    #[error("zero horizontal extent after normalization")]
    ZeroHorizontalExtent,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Adjacency lists with Euclidean edge weights.
#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    pub adj: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    pub fn from_edges(points: &[Point], edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); points.len()];
        for (a, b) in edges {
            let w = points[a].dist(points[b]);
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        for list in &mut adj {
            list.sort_by(|x, y| x.0.cmp(&y.0));
            list.dedup_by_key(|e| e.0);
        }
        WeightedGraph { adj }
    }

    pub fn from_triangulation(t: &Triangulation) -> Self {
        WeightedGraph::from_edges(&t.points, t.edges())
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }
}

/// Single-source distances and the predecessor tree.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortestPaths {
    pub source: usize,
    pub dist: Vec<f64>,
    pub pred: Vec<Option<usize>>,
}

impl ShortestPaths {
    /// Vertices from the source to `target`, or `None` when unreachable.
    pub fn path_to(&self, target: usize) -> Option<Vec<usize>> {
        if !self.dist[target].is_finite() {
            return None;
        }
        let mut path = vec![target];
        let mut v = target;
        while let Some(p) = self.pred[v] {
            path.push(p);
            v = p;
        }
        path.reverse();
        Some(path)
    }
}

#[derive(Copy, Clone, PartialEq)]
struct State {
    dist: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn dijkstra(g: &WeightedGraph, source: usize) -> ShortestPaths {
    let n = g.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State { dist: 0.0, node: source });
    while let Some(State { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, w) in &g.adj[node] {
            let nd = d + w;
            if nd < dist[next] {
                dist[next] = nd;
                pred[next] = Some(node);
                heap.push(State { dist: nd, node: next });
            }
        }
    }
    ShortestPaths { source, dist, pred }
}

pub fn graph_distances(t: &Triangulation, source: usize) -> ShortestPaths {
    dijkstra(&WeightedGraph::from_triangulation(t), source)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub max_ratio: f64,
    pub witness_pair: (usize, usize),
    pub witness_path: Vec<usize>,
    /// Pairs closer than the tolerance, left out of the maximum.
    pub excluded_pairs: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<Vec<f64>>>,
}

pub fn stretch_factor(t: &Triangulation) -> Result<StretchReport, SpannerError> {
    stretch_factor_with(t, false)
}

/// Exact all-pairs stretch factor. Ties go to the lexicographically smallest
/// pair.
pub fn stretch_factor_with(t: &Triangulation, keep_ratios: bool) -> Result<StretchReport, SpannerError> {
    let g = WeightedGraph::from_triangulation(t);
    let n = g.len();
    struct Row {
        best: Option<(f64, usize)>,
        excluded: Vec<(usize, usize)>,
        ratios: Vec<f64>,
        unreachable: Option<usize>,
        sp: ShortestPaths,
    }
    let rows: Vec<Row> = (0..n)
        .into_par_iter()
        .map(|s| {
            let sp = dijkstra(&g, s);
            let mut best: Option<(f64, usize)> = None;
            let mut excluded = Vec::new();
            let mut ratios = vec![1.0; n];
            let mut unreachable = None;
            for v in s + 1..n {
                let d2 = t.points[s].dist(t.points[v]);
                if d2 < TAU {
                    excluded.push((s, v));
                    ratios[v] = f64::NAN;
                    continue;
                }
                if !sp.dist[v].is_finite() {
                    unreachable.get_or_insert(v);
                    continue;
                }
                let r = sp.dist[v] / d2;
                ratios[v] = r;
                if best.map_or(true, |(b, _)| r > b) {
                    best = Some((r, v));
                }
            }
            Row {
                best,
                excluded,
                ratios,
                unreachable,
                sp,
            }
        })
        .collect();

    let mut max_ratio = 1.0;
    let mut witness: Option<(usize, usize)> = None;
    let mut excluded_pairs = Vec::new();
    for (s, row) in rows.iter().enumerate() {
        if let Some(v) = row.unreachable {
            return Err(SpannerError::Disconnected(v, s));
        }
        excluded_pairs.extend(row.excluded.iter().copied());
        if let Some((r, v)) = row.best {
            if witness.is_none() || r > max_ratio {
                max_ratio = r;
                witness = Some((s, v));
            }
        }
    }
    let witness_pair = witness.unwrap_or((0, n.saturating_sub(1).min(1)));
    let witness_path = if n >= 2 {
        rows[witness_pair.0]
            .sp
            .path_to(witness_pair.1)
            .unwrap_or_default()
    } else {
        vec![0]
    };
    let ratios = keep_ratios.then(|| {
        let mut m = vec![vec![1.0; n]; n];
        for (s, row) in rows.iter().enumerate() {
            for v in s + 1..n {
                m[s][v] = row.ratios[v];
                m[v][s] = row.ratios[v];
            }
        }
        m
    });
    Ok(StretchReport {
        max_ratio,
        witness_pair,
        witness_path,
        excluded_pairs,
        ratios,
    })
}

/// Both sides of `d_T(s,t) ≤ max{5/√3 − 1, √3 + m}·d_x(s,t)` in the frame
/// where `t − s` has slope `m ∈ [0, 1/√3]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivideBound {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub slope: f64,
    pub dx: f64,
}

pub fn check_divide_bound(t: &Triangulation, s: usize, target: usize) -> Result<DivideBound, SpannerError> {
    let sp = graph_distances(t, s);
    divide_bound_from(t, &sp, target)
}

/// As [`check_divide_bound`] with distances from `s` already computed.
pub fn divide_bound_from(t: &Triangulation, sp: &ShortestPaths, target: usize) -> Result<DivideBound, SpannerError> {
    let (ps, pt) = (t.points[sp.source], t.points[target]);
    let sym = normalize_pair(ps, pt)?;
    let d = sym.apply(pt - ps);
    if d.x <= TAU {
        return Err(SpannerError::ZeroHorizontalExtent);
    }
    let slope = d.y / d.x;
    let lhs = sp.dist[target];
    if !lhs.is_finite() {
        return Err(SpannerError::Disconnected(target, sp.source));
    }
    let rhs = (5.0 / SQRT3 - 1.0).max(SQRT3 + slope) * d.x;
    Ok(DivideBound {
        holds: lhs <= rhs + TAU,
        lhs,
        rhs,
        slope,
        dx: d.x,
    })
}
