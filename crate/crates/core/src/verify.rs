//! Runs every per-instance check over a triangulation and tallies the results.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delaunay::Triangulation;
use crate::geom::{Side, TAU};
use crate::spanner::{divide_bound_from, graph_distances};
use crate::sweep::{
    build_sweep_with, classify_transitions, key_lemma_with, verify_continuity, verify_critical_points,
    verify_discontinuities, verify_f_b, verify_growth_table, verify_interval_lemmas, verify_potential_endpoint,
    SweepError,
};
use crate::walk::{
    check_canonical_extension, check_short_edges, decompose, gentle_with, is_standard, SectionDistances,
    WalkDecomposition, WalkError,
};

pub const DIVIDE_BOUND: &str = "divide_bound";
pub const SHORT_GENTLE_EDGES: &str = "short_gentle_edges";
pub const CANONICAL_EXTENSION: &str = "canonical_extension";
pub const KEY_BOUND_EDGE_FREE: &str = "key_bound_edge_free";
pub const KEY_BOUND_PATH_FREE: &str = "key_bound_path_free";
pub const SWEEP_BUILD: &str = "sweep_build";
pub const ALLOWED_TRANSITIONS: &str = "allowed_transitions";
pub const GROWTH_TABLE: &str = "growth_table";
pub const POTENTIAL_ENDPOINT: &str = "potential_endpoint";
pub const DISCONTINUITIES: &str = "discontinuities";
pub const CONTINUITY: &str = "continuity";
pub const F_B: &str = "f_b";
pub const INTERVAL_BOUNDS: &str = "interval_bounds";
pub const CRITICAL_POINTS: &str = "critical_points";
pub const TERMINAL_BOUND: &str = "terminal_bound";

/// Deepest recursion when a pair is split at points on its segment.
const MAX_SPLIT_DEPTH: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
}

impl Tally {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Ordered pairs to walk; all ordered pairs when `None`.
    pub pairs: Option<Vec<(usize, usize)>>,
    pub sweeps: bool,
    /// Search canonical paths in standard sections.
    pub canonical: bool,
    pub tol: f64,
    /// Failure messages kept in the report.
    pub max_messages: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            pairs: None,
            sweeps: true,
            canonical: true,
            tol: TAU,
            max_messages: 20,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub points: usize,
    pub pairs: usize,
    pub walks: usize,
    /// Pairs replaced by the two halves at a point on their segment.
    pub splits: usize,
    /// Walks that could not be built, by reason.
    pub walk_skipped: BTreeMap<String, usize>,
    pub gentle_free_sections: usize,
    pub sweeps: usize,
    pub path_free_sweeps: usize,
    pub checks: BTreeMap<String, Tally>,
    /// Growth-table segments too short for central differences.
    pub fd_skipped: usize,
    /// Interval candidates left out for an off-chain far endpoint.
    pub off_chain_skipped: usize,
    /// Segment ends where `x` lies outside `[b, f]`.
    pub x_outside_fb: usize,
    pub messages: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.values().all(Tally::passed)
    }

    pub fn tally(&self, name: &str) -> Tally {
        self.checks.get(name).copied().unwrap_or_default()
    }

    fn record(&mut self, name: &str, ok: bool, what: impl FnOnce() -> String) {
        self.add(name, 1, usize::from(!ok), what);
    }

    fn add(&mut self, name: &str, checked: usize, failed: usize, what: impl FnOnce() -> String) {
        let t = self.checks.entry(name.into()).or_default();
        t.checked += checked;
        t.failed += failed;
        if failed > 0 {
            self.messages.push(format!("{name}: {}", what()));
        }
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.pairs += other.pairs;
        self.walks += other.walks;
        self.splits += other.splits;
        for (k, v) in other.walk_skipped {
            *self.walk_skipped.entry(k).or_default() += v;
        }
        self.gentle_free_sections += other.gentle_free_sections;
        self.sweeps += other.sweeps;
        self.path_free_sweeps += other.path_free_sweeps;
        for (k, v) in other.checks {
            let t = self.checks.entry(k).or_default();
            t.checked += v.checked;
            t.failed += v.failed;
        }
        self.fd_skipped += other.fd_skipped;
        self.off_chain_skipped += other.off_chain_skipped;
        self.x_outside_fb += other.x_outside_fb;
        self.messages.extend(other.messages);
    }
}

fn walk_error_kind(e: &WalkError) -> &'static str {
    match e {
        WalkError::Geom(_) => "geometry",
        WalkError::PointOnSegment(_) => "point on segment",
        WalkError::DegenerateCrossing(_) => "degenerate crossing",
        WalkError::LeavesRegion(_) => "leaves region",
        WalkError::NoEmptyHexagon(_) => "no empty hexagon",
        WalkError::BadSection(..) => "bad section",
        WalkError::NoGentlePath(..) => "no gentle path",
    }
}

fn sweep_error_kind(e: &SweepError) -> &'static str {
    match e {
        SweepError::Walk(_) => "walk",
        SweepError::GentleEdge(..) => "gentle edge",
        SweepError::NotOnWestSide(_) => "not on west side",
        SweepError::NotOnEastSide(_) => "not on east side",
        SweepError::CentersNotIncreasing(..) => "centers not increasing",
        SweepError::EventSolveFailed(_) => "event solve failed",
        SweepError::HexMismatch(..) => "hexagon mismatch",
        SweepError::ForbiddenTransition(..) => "forbidden transition",
        SweepError::NotOnBoundary(_) => "not on boundary",
    }
}

/// Walk-level and sweep-level checks for one walk.
pub fn verify_walk(walk: &WalkDecomposition, opts: &VerifyOptions, rep: &mut VerifyReport) {
    let tag = format!("walk {}-{}", walk.s, walk.t);
    let (cases, bad) = check_short_edges(walk);
    rep.add(SHORT_GENTLE_EDGES, cases, bad.len(), || format!("{tag}: {bad:?}"));
    let n = walk.n();
    for i in 1..=n {
        for j in i..=n {
            verify_section(walk, i, j, opts, rep, &tag);
        }
    }
}

fn verify_section(walk: &WalkDecomposition, i: usize, j: usize, opts: &VerifyOptions, rep: &mut VerifyReport, tag: &str) {
    let dist = SectionDistances::new(walk, i, j);
    let gentle = gentle_with(walk, i, j, &dist);
    let tag = format!("{tag} section ({i}, {j})");
    if opts.canonical && gentle.has_gentle_path() && is_standard(walk, i, j, &gentle) {
        let ext = check_canonical_extension(walk, i, j, &dist, &gentle);
        rep.record(CANONICAL_EXTENSION, ext.holds(), || format!("{tag}: no canonical gentle path"));
    }
    if gentle.has_gentle_edge() {
        return;
    }
    rep.gentle_free_sections += 1;
    let path_free = !gentle.has_gentle_path();
    for p in walk.tri(i) {
        if !walk.touches(i, p, Side::W) {
            continue;
        }
        for q in walk.tri(j) {
            if !walk.touches(j, q, Side::E) {
                continue;
            }
            let tag = format!("{tag} p {p} q {q}");
            if let Ok(k) = key_lemma_with(walk, i, j, p, q, &gentle, dist.dist(p, q)) {
                rep.record(KEY_BOUND_EDGE_FREE, k.edge_free_bound_holds, || {
                    format!("{tag}: ratio {}", k.ratio)
                });
                if let Some(ok) = k.path_free_bound_holds {
                    rep.record(KEY_BOUND_PATH_FREE, ok, || format!("{tag}: ratio {}", k.ratio));
                }
            }
            if opts.sweeps {
                verify_sweep(walk, i, j, p, q, &gentle, path_free, opts, rep, &tag);
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_sweep(
    walk: &WalkDecomposition,
    i: usize,
    j: usize,
    p: usize,
    q: usize,
    gentle: &crate::walk::GentleReport,
    path_free: bool,
    opts: &VerifyOptions,
    rep: &mut VerifyReport,
    tag: &str,
) {
    let trace = match build_sweep_with(walk, i, j, p, q, gentle) {
        Ok(t) => t,
        Err(e) => {
            rep.record(SWEEP_BUILD, false, || format!("{tag}: {} ({e})", sweep_error_kind(&e)));
            return;
        }
    };
    rep.record(SWEEP_BUILD, true, String::new);
    rep.sweeps += 1;
    let labels = classify_transitions(&trace);
    rep.record(ALLOWED_TRANSITIONS, labels.is_ok(), || format!("{tag}: {labels:?}"));
    let g = verify_growth_table(&trace, walk);
    rep.fd_skipped += g.fd_skipped;
    rep.record(GROWTH_TABLE, g.holds(), || {
        format!(
            "{tag}: {:?}",
            g.table_mismatches
                .first()
                .or(g.fd_mismatches.first())
                .or(g.value_mismatches.first())
                .map(|m| (&m.quantity, m.label, m.found, m.expected))
        )
    });
    let ep = verify_potential_endpoint(&trace, walk);
    rep.record(POTENTIAL_ENDPOINT, ep.holds(opts.tol), || format!("{tag}: diff {}", ep.diff));
    let d = verify_discontinuities(&trace);
    rep.add(DISCONTINUITIES, d.jumps, d.violations.len(), || format!("{tag}: max jump {}", d.max_jump));
    let c = verify_continuity(&trace);
    rep.add(CONTINUITY, c.breakpoints, c.violations.len(), || format!("{tag}: {:?}", c.violations.first()));
    let fb = verify_f_b(&trace);
    rep.x_outside_fb += fb.x_outside;
    rep.record(F_B, fb.holds(), || format!("{tag}: {fb:?}"));
    if !path_free {
        return;
    }
    rep.path_free_sweeps += 1;
    let il = verify_interval_lemmas(&trace, walk);
    rep.off_chain_skipped += il.off_chain_skipped;
    rep.add(INTERVAL_BOUNDS, il.checked(), il.violations.len(), || {
        format!("{tag}: {:?}", il.violations.first())
    });
    let cp = verify_critical_points(&trace);
    rep.add(CRITICAL_POINTS, cp.checked, cp.violations.len(), || {
        format!("{tag}: {:?}", cp.violations.first())
    });
    let (p_end, bound) = cp.terminal;
    rep.record(TERMINAL_BOUND, p_end <= bound + TAU, || format!("{tag}: P {p_end} > {bound}"));
}

fn verify_pair(tri: &Triangulation, s: usize, t: usize, depth: usize, opts: &VerifyOptions, rep: &mut VerifyReport) {
    match decompose(tri, s, t) {
        Ok(walk) => {
            rep.walks += 1;
            verify_walk(&walk, opts, rep);
        }
        Err(WalkError::PointOnSegment(k)) if depth < MAX_SPLIT_DEPTH && k != s && k != t => {
            rep.splits += 1;
            verify_pair(tri, s, k, depth + 1, opts, rep);
            verify_pair(tri, k, t, depth + 1, opts, rep);
        }
        Err(e) => *rep.walk_skipped.entry(walk_error_kind(&e).into()).or_default() += 1,
    }
}

/// All checks over the requested ordered pairs, in parallel over sources.
/// The result does not depend on the number of threads.
pub fn verify_triangulation(tri: &Triangulation, opts: &VerifyOptions) -> VerifyReport {
    let n = tri.points.len();
    let pairs: Vec<(usize, usize)> = match &opts.pairs {
        Some(p) => p.clone(),
        None => (0..n).flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t))).collect(),
    };
    let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(s, t) in &pairs {
        by_source.entry(s).or_default().push(t);
    }
    let groups: Vec<(usize, Vec<usize>)> = by_source.into_iter().collect();
    let parts: Vec<VerifyReport> = groups
        .par_iter()
        .map(|(s, targets)| {
            let mut rep = VerifyReport::default();
            let sp = graph_distances(tri, *s);
            for &t in targets {
                rep.pairs += 1;
                match divide_bound_from(tri, &sp, t) {
                    Ok(b) => rep.record(DIVIDE_BOUND, b.holds, || format!("pair {s}-{t}: {} > {}", b.lhs, b.rhs)),
                    Err(e) => rep.record(DIVIDE_BOUND, false, || format!("pair {s}-{t}: {e}")),
                }
                verify_pair(tri, *s, t, 0, opts, &mut rep);
            }
            rep
        })
        .collect();
    let mut out = VerifyReport {
        points: n,
        ..Default::default()
    };
    for part in parts {
        out.merge(part);
    }
    out.messages.truncate(opts.max_messages);
    out
}
