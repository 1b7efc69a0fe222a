//! Bad-transition intervals, their time budgets, critical points and the
//! section-level length bounds.

use serde::{Deserialize, Serialize};

use crate::geom::{Side, SQRT3, TAU};
use crate::spanner::dijkstra;
use crate::walk::{find_gentle, GentleReport, WalkDecomposition};

use super::{SweepError, SweepTrace, Transition, ALLOWED};

/// Time spent in each transition over an interval, with end values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalStats {
    pub x_l: f64,
    pub x_r: f64,
    pub z: Vec<(Transition, f64)>,
    /// Right limit at `x_l`.
    pub theta_f_l: f64,
    /// Left limit at `x_r`.
    pub theta_b_r: f64,
    pub r_l: f64,
    pub r_r: f64,
    pub w_l: f64,
    pub w_r: f64,
    pub e_l: f64,
    pub e_r: f64,
}

impl IntervalStats {
    pub fn z(&self, t: Transition) -> f64 {
        self.z.iter().find(|(s, _)| *s == t).map_or(0.0, |(_, v)| *v)
    }

    pub fn total(&self) -> f64 {
        self.z.iter().map(|(_, v)| v).sum()
    }
}

pub fn interval_stats(trace: &SweepTrace, x_l: f64, x_r: f64) -> IntervalStats {
    let mut z: Vec<(Transition, f64)> = ALLOWED.iter().map(|&t| (t, 0.0)).collect();
    for s in &trace.segments {
        let len = (s.x1.min(x_r) - s.x0.max(x_l)).max(0.0);
        if len > 0.0 {
            match z.iter_mut().find(|(t, _)| *t == s.label) {
                Some(e) => e.1 += len,
                None => z.push((s.label, len)),
            }
        }
    }
    let right = trace.segment_at(x_l);
    let k = trace.segments.partition_point(|s| s.x1 < x_r);
    let left = &trace.segments[k.min(trace.segments.len() - 1)];
    IntervalStats {
        x_l,
        x_r,
        z,
        theta_f_l: right.theta_f.at(right.x0, x_l),
        theta_b_r: left.theta_b.at(left.x0, x_r),
        r_l: right.r.at(right.x0, x_l),
        r_r: left.r.at(left.x0, x_r),
        w_l: right.w.at(right.x0, x_l),
        w_r: left.w.at(left.x0, x_r),
        e_l: right.e.at(right.x0, x_l),
        e_r: left.e.at(left.x0, x_r),
    }
}

/// One segment with its own end values, possibly seen under `x ↦ −x`.
#[derive(Clone, Copy, Debug)]
struct Piece {
    x0: f64,
    x1: f64,
    label: Transition,
    r: (f64, f64),
    w: (f64, f64),
    e: (f64, f64),
    tf: (f64, f64),
    tb: (f64, f64),
}

fn timeline(trace: &SweepTrace) -> Vec<Piece> {
    trace
        .segments
        .iter()
        .map(|s| {
            let ends = |f: super::Lin| (f.v0, f.at(s.x0, s.x1));
            Piece {
                x0: s.x0,
                x1: s.x1,
                label: s.label,
                r: ends(s.r),
                w: ends(s.w),
                e: ends(s.e),
                tf: ends(s.theta_f),
                tb: ends(s.theta_b),
            }
        })
        .collect()
}

fn mirrored(pieces: &[Piece]) -> Vec<Piece> {
    pieces
        .iter()
        .rev()
        .map(|p| Piece {
            x0: -p.x1,
            x1: -p.x0,
            label: p.label.mirrored(),
            r: (p.r.1, p.r.0),
            w: (-p.e.1, -p.e.0),
            e: (-p.w.1, -p.w.0),
            tf: (p.tb.1, p.tb.0),
            tb: (p.tf.1, p.tf.0),
        })
        .collect()
}

/// Time in `[a, b]` spent in labels matching `pred`.
fn time_in(pieces: &[Piece], a: f64, b: f64, pred: impl Fn(Transition) -> bool) -> f64 {
    pieces
        .iter()
        .filter(|p| pred(p.label))
        .map(|p| (p.x1.min(b) - p.x0.max(a)).max(0.0))
        .sum()
}

/// Value at an end of piece `p`: `at_end` selects `x1`.
fn end(v: (f64, f64), at_end: bool) -> f64 {
    if at_end {
        v.1
    } else {
        v.0
    }
}

/// An interval type stated for a left-anchored bad transition. The two
/// right-anchored types are checked on the mirrored timeline.
struct Form {
    anchor: Transition,
    /// Labels excluded from the open interval.
    stop: fn(Transition) -> bool,
    /// Labels whose time is bounded.
    count: fn(Transition) -> bool,
    /// Bad label excluded from the closed interval.
    banned: Transition,
    /// Required label at `x_r` for the linear worst case.
    end_linear: fn(Transition) -> bool,
    /// Labels whose time is credited in the recovery case.
    credit: [Transition; 2],
    /// Whether the argument follows the upper chain.
    upper_chain: bool,
}

const FORM_15: Form = Form {
    anchor: Transition::new(1, 5),
    stop: |t| t.u == 1,
    count: |t| t.u == 5 || t.u == 4,
    banned: Transition::new(4, 0),
    end_linear: |t| t.u == 4,
    credit: [Transition::new(2, 0), Transition::new(3, 0)],
    upper_chain: true,
};

const FORM_31: Form = Form {
    anchor: Transition::new(3, 1),
    stop: |t| t.l == 1,
    count: |t| t.l == 3 || t.l == 4,
    banned: Transition::new(2, 4),
    end_linear: |t| t.l == 4,
    credit: [Transition::new(2, 0), Transition::new(2, 5)],
    upper_chain: false,
};

/// Which inequality an interval was checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalBound {
    /// Time with `u` (or `ℓ`) on the far sides against `√3·r`.
    FarSideTime,
    /// Bad time against the interval's width when it ends on the far side.
    LinearWorstCase,
    /// Bad time against the movement of `w` when it ends on the near vertex.
    SoftRecovery,
    /// Second, coarser form of the linear worst case.
    LinearWorstCaseCoarse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaViolation {
    pub bound: IntervalBound,
    /// The bad transition the interval is built on, in the trace's frame.
    pub label: Transition,
    pub x_l: f64,
    pub x_r: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalLemmaReport {
    pub far_side_checked: usize,
    pub linear_checked: usize,
    pub recovery_checked: usize,
    /// Candidate intervals left out because they reach past the last center
    /// while the far endpoint is not on the chain the bound follows.
    pub off_chain_skipped: usize,
    /// Smallest `rhs − lhs` seen.
    pub min_slack: f64,
    pub violations: Vec<LemmaViolation>,
}

impl IntervalLemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn checked(&self) -> usize {
        self.far_side_checked + self.linear_checked + self.recovery_checked
    }
}

/// `x_far` is the last center in the timeline's frame; past it `u` and `ℓ`
/// are the far endpoint, which counts as a chain point only if `far_on_chain`.
fn check_form(
    pieces: &[Piece],
    form: &Form,
    mirror: bool,
    x_far: f64,
    far_on_chain: bool,
    rep: &mut IntervalLemmaReport,
) {
    let c = 2.0 / SQRT3;
    let mut record = |bound, x_l: f64, x_r: f64, lhs: f64, rhs: f64| {
        let slack = rhs - lhs;
        rep.min_slack = rep.min_slack.min(slack);
        if slack < -TAU {
            let (x_l, x_r, label) = if mirror {
                (-x_r, -x_l, form.anchor.mirrored())
            } else {
                (x_l, x_r, form.anchor)
            };
            rep.violations.push(LemmaViolation {
                bound,
                label,
                x_l,
                x_r,
                lhs,
                rhs,
            });
        }
    };
    for (ia, a) in pieces.iter().enumerate() {
        if a.label != form.anchor {
            continue;
        }
        for at_end in [false, true] {
            let x_l = if at_end { a.x1 } else { a.x0 };
            let (r_l, w_l, tf_l) = (end(a.r, at_end), end(a.w, at_end), end(a.tf, at_end));
            let anchor_time = |x_r: f64| time_in(pieces, x_l, x_r, |t| t == form.anchor);

            // Longest interval free of stop labels.
            let stop = pieces[ia + 1..].iter().find(|p| (form.stop)(p.label));
            let mut x_r = stop.map_or(pieces[pieces.len() - 1].x1, |p| p.x0);
            if !far_on_chain && x_r > x_far {
                rep.off_chain_skipped += 1;
                x_r = x_far.max(x_l);
            }
            let z = time_in(pieces, x_l, x_r, form.count);
            rep.far_side_checked += 1;
            record(IntervalBound::FarSideTime, x_l, x_r, z + (SQRT3 - 1.0) * tf_l, SQRT3 * r_l);

            // Ends on the far side before any stop or banned label.
            for b in &pieces[ia + 1..] {
                if b.label == form.banned || (form.stop)(b.label) {
                    break;
                }
                if !(form.end_linear)(b.label) {
                    continue;
                }
                for b_end in [false, true] {
                    let x_r = if b_end { b.x1 } else { b.x0 };
                    let lhs = c * anchor_time(x_r);
                    let e_r = end(b.e, b_end);
                    if !far_on_chain && e_r > x_far + TAU {
                        rep.off_chain_skipped += 1;
                        continue;
                    }
                    rep.linear_checked += 1;
                    record(IntervalBound::LinearWorstCase, x_l, x_r, lhs, (c - 1.0) * (e_r - w_l - 2.0 * tf_l));
                    record(
                        IntervalBound::LinearWorstCaseCoarse,
                        x_l,
                        x_r,
                        lhs,
                        (2.0 * c - 2.0) * (x_r - w_l - tf_l),
                    );
                }
            }

            // Ends where a stop label starts, with no banned label before it.
            let mut recovery = None;
            for b in &pieces[ia + 1..] {
                if b.label == form.banned {
                    break;
                }
                if (form.stop)(b.label) {
                    recovery = Some(b);
                    break;
                }
            }
            if let Some(b) = recovery.filter(|b| far_on_chain || b.x0 <= x_far + TAU) {
                let x_r = b.x0;
                let credit = time_in(pieces, x_l, x_r, |t| form.credit.contains(&t));
                let lhs = c * anchor_time(x_r) - credit / SQRT3;
                let rhs = (c - 1.0) * (b.w.0 - w_l - 2.0 * tf_l);
                rep.recovery_checked += 1;
                record(IntervalBound::SoftRecovery, x_l, x_r, lhs, rhs);
            }
        }
    }
}

/// Checks the three interval inequalities for all four bad transitions.
/// Every piece end inside a bad piece is tried as `x_l`, with the longest
/// admissible `x_r` (or every admissible one, when `x_r` must carry a given
/// label). An interval whose argument runs past the last (first) center
/// needs `q` (`p`) to be a label of the chain it follows.
pub fn verify_interval_lemmas(trace: &SweepTrace, walk: &WalkDecomposition) -> IntervalLemmaReport {
    let mut rep = IntervalLemmaReport {
        min_slack: f64::INFINITY,
        ..Default::default()
    };
    let (i, j) = trace.section;
    let (ups, lows) = (walk.section_upper(i, j), walk.section_lower(i, j));
    let on_chain = |v: usize, upper: bool| if upper { ups.contains(&v) } else { lows.contains(&v) };
    let first = trace.centers[0];
    let last = trace.centers[trace.centers.len() - 1];
    let direct = timeline(trace);
    let mirror = mirrored(&direct);
    for form in [&FORM_15, &FORM_31] {
        check_form(&direct, form, false, last, on_chain(trace.q, form.upper_chain), &mut rep);
        check_form(&mirror, form, true, -first, on_chain(trace.p, form.upper_chain), &mut rep);
    }
    rep
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalSide {
    Left,
    Right,
}

/// A critical abscissa and the segment whose values apply there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub side: CriticalSide,
    pub segment: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointSet {
    pub points: Vec<CriticalPoint>,
}

impl CriticalPointSet {
    /// Distinct critical abscissas in increasing order.
    pub fn xs(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.points.iter().map(|c| c.x).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }

    pub fn left(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|c| c.side == CriticalSide::Left)
    }

    pub fn right(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|c| c.side == CriticalSide::Right)
    }
}

/// Splits the segments into maximal runs free of `forbidden` and returns
/// the index of the first (or last) segment labelled `bad` in each run.
fn run_ends(labels: &[Transition], bad: Transition, forbidden: impl Fn(Transition) -> bool, first: bool) -> Vec<usize> {
    let mut out = Vec::new();
    let mut current: Option<usize> = None;
    for (k, &t) in labels.iter().enumerate() {
        if forbidden(t) {
            out.extend(current.take());
            continue;
        }
        if t == bad && (!first || current.is_none()) {
            current = Some(k);
        }
    }
    out.extend(current);
    out
}

pub fn critical_points(trace: &SweepTrace) -> CriticalPointSet {
    let labels = trace.labels();
    let last = labels.len().saturating_sub(1);
    let mut points = vec![
        CriticalPoint {
            x: trace.x_start,
            side: CriticalSide::Left,
            segment: 0,
        },
        CriticalPoint {
            x: trace.x_start,
            side: CriticalSide::Right,
            segment: 0,
        },
    ];
    let f15 = |t: Transition| t.u == 1 || t.u == 4 || t == Transition::new(4, 0);
    let f31 = |t: Transition| t.l == 1 || t.l == 4 || t == Transition::new(2, 4);
    let f24 = |t: Transition| t.l == 4 || t.l == 1 || t == Transition::new(3, 1);
    let f40 = |t: Transition| t.u == 4 || t.u == 1 || t == Transition::new(1, 5);
    let mut left: Vec<usize> = run_ends(&labels, Transition::new(1, 5), f15, true);
    left.extend(run_ends(&labels, Transition::new(3, 1), f31, true));
    let mut right: Vec<usize> = run_ends(&labels, Transition::new(2, 4), f24, false);
    right.extend(run_ends(&labels, Transition::new(4, 0), f40, false));
    for k in left {
        points.push(CriticalPoint {
            x: trace.segments[k].x0,
            side: CriticalSide::Left,
            segment: k,
        });
    }
    for k in right {
        points.push(CriticalPoint {
            x: trace.segments[k].x1,
            side: CriticalSide::Right,
            segment: k,
        });
    }
    for side in [CriticalSide::Left, CriticalSide::Right] {
        points.push(CriticalPoint {
            x: trace.x_end,
            side,
            segment: last,
        });
    }
    points.sort_by(|a, b| a.x.total_cmp(&b.x));
    CriticalPointSet { points }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalCheck {
    pub point: CriticalPoint,
    pub p: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointReport {
    pub checked: usize,
    pub min_slack: f64,
    pub violations: Vec<CriticalCheck>,
    /// `P(x_end)` and `(10/√3 − 2)(x_end − x_start)`.
    pub terminal: (f64, f64),
}

impl CriticalPointReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.terminal.0 <= self.terminal.1 + TAU
    }
}

/// Rate of growth of `P` allowed on average.
pub const AVERAGE_RATE: f64 = 10.0 / SQRT3 - 2.0;

/// The potential bound at every critical point, with `x` measured from
/// `x_start`.
pub fn verify_critical_points(trace: &SweepTrace) -> CriticalPointReport {
    let mut rep = CriticalPointReport {
        min_slack: f64::INFINITY,
        ..Default::default()
    };
    let x0 = trace.x_start;
    for c in critical_points(trace).points {
        let s = &trace.segments[c.segment];
        let at = |f: super::Lin| f.at(s.x0, c.x);
        let (p, r, w, e, tf, tb) = (at(s.p), at(s.r), at(s.w) - x0, at(s.e) - x0, at(s.theta_f), at(s.theta_b));
        let bound = match c.side {
            CriticalSide::Left => AVERAGE_RATE * (w + tf) + 6.0 / SQRT3 * (r - tf),
            CriticalSide::Right => AVERAGE_RATE * (e - tb) - 6.0 / SQRT3 * (r - tb),
        };
        rep.checked += 1;
        rep.min_slack = rep.min_slack.min(bound - p);
        if p > bound + TAU {
            rep.violations.push(CriticalCheck { point: c, p, bound });
        }
    }
    rep.terminal = (trace.final_potential(), AVERAGE_RATE * (trace.x_end - x0));
    rep
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyLemmaReport {
    pub section: (usize, usize),
    pub p: usize,
    pub q: usize,
    /// Shortest path from `p` to `q` inside the section.
    pub d_sec: f64,
    pub dx: f64,
    pub gentle_edge: bool,
    pub gentle_path: bool,
    /// `d_sec / dx`.
    pub ratio: f64,
    pub edge_free_bound_holds: bool,
    /// `None` when the section has a gentle path.
    pub path_free_bound_holds: Option<bool>,
}

impl KeyLemmaReport {
    pub fn holds(&self) -> bool {
        self.edge_free_bound_holds && self.path_free_bound_holds.unwrap_or(true)
    }
}

/// `d_sec(p, q) ≤ (4/√3)·dx` for a section with no gentle edge, and
/// `≤ (5/√3 − 1)·dx` when it has no gentle path either.
pub fn verify_key_lemma(
    walk: &WalkDecomposition,
    i: usize,
    j: usize,
    p: usize,
    q: usize,
) -> Result<KeyLemmaReport, SweepError> {
    let gentle = find_gentle(walk, i, j)?;
    let d_sec = dijkstra(&walk.section_graph(i, j), p).dist[q];
    key_lemma_with(walk, i, j, p, q, &gentle, d_sec)
}

/// [`verify_key_lemma`] with the gentle report and `d_sec(p, q)` supplied.
pub fn key_lemma_with(
    walk: &WalkDecomposition,
    i: usize,
    j: usize,
    p: usize,
    q: usize,
    gentle: &GentleReport,
    d_sec: f64,
) -> Result<KeyLemmaReport, SweepError> {
    if gentle.has_gentle_edge() {
        return Err(SweepError::GentleEdge(i, j));
    }
    if !walk.tri(i).contains(&p) || !walk.touches(i, p, Side::W) {
        return Err(SweepError::NotOnWestSide(p));
    }
    if !walk.tri(j).contains(&q) || !walk.touches(j, q, Side::E) {
        return Err(SweepError::NotOnEastSide(q));
    }
    let dx = walk.points[q].x - walk.points[p].x;
    let has_path = gentle.has_gentle_path();
    Ok(KeyLemmaReport {
        section: (i, j),
        p,
        q,
        d_sec,
        dx,
        gentle_edge: false,
        gentle_path: has_path,
        ratio: if dx > 0.0 { d_sec / dx } else { f64::INFINITY },
        edge_free_bound_holds: d_sec <= 4.0 / SQRT3 * dx + TAU,
        path_free_bound_holds: (!has_path).then(|| d_sec <= (5.0 / SQRT3 - 1.0) * dx + TAU),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::sweep::{Lin, Segment, SegmentKind};

    /// A trace with the given labels and lengths, `r` rising at slope 1 from 0.
    fn synthetic(pieces: &[(Transition, f64)]) -> SweepTrace {
        let mut x = 0.0;
        let mut segments = Vec::new();
        for (k, &(label, len)) in pieces.iter().enumerate() {
            let r = Lin::new(x, 1.0);
            segments.push(Segment {
                kind: SegmentKind::Pinned(k),
                x0: x,
                x1: x + len,
                label,
                u: 0,
                l: 1,
                u_side: Side::NW,
                l_side: Side::SW,
                prefix_u: 0.0,
                prefix_l: 0.0,
                ubar_offset: 0.0,
                lbar_offset: 0.0,
                f: x,
                b: x,
                cy: Lin::default(),
                r,
                w: Lin::new(0.0, 0.0),
                e: Lin::new(2.0 * x, 2.0),
                d_n: Lin::default(),
                d_s: Lin::default(),
                y_n: Lin::default(),
                y_s: Lin::default(),
                u_pot: Lin::default(),
                l_pot: Lin::default(),
                p: Lin::default(),
                u_bar: Lin::default(),
                l_bar: Lin::default(),
                theta_f: Lin::new(0.0, -1.0),
                theta_b: Lin::new(0.0, 1.0),
            });
            x += len;
        }
        SweepTrace {
            schema: "hexspan/1".into(),
            section: (1, 1),
            p: 0,
            q: 1,
            x_start: 0.0,
            x_end: x,
            centers: vec![0.0],
            lead_points: (0.0, x),
            breakpoints: segments.iter().map(|s| s.x0).chain([x]).collect(),
            segments,
            jumps: Vec::new(),
            d_pq: 0.0,
        }
    }

    const T: fn(u8, u8) -> Transition = Transition::new;

    #[test]
    fn no_bad_transitions_gives_only_the_ends() {
        let tr = synthetic(&[(T(1, 0), 0.3), (T(2, 0), 0.2), (T(3, 5), 0.4), (T(4, 5), 0.1)]);
        assert_eq!(critical_points(&tr).xs(), vec![0.0, 1.0]);
    }

    #[test]
    fn leading_bad_segment_is_left_critical() {
        let tr = synthetic(&[(T(1, 5), 0.25), (T(2, 5), 0.25), (T(1, 5), 0.25), (T(3, 1), 0.25)]);
        let cps = critical_points(&tr);
        let left: Vec<f64> = cps.left().map(|c| c.x).collect();
        // one run for t_15 (the second t_15 is in the same run), one for t_31
        assert_eq!(left, vec![0.0, 0.0, 0.75, 1.0]);
        let right: Vec<f64> = cps.right().map(|c| c.x).collect();
        assert_eq!(right, vec![0.0, 1.0]);
    }

    #[test]
    fn forbidden_label_splits_runs() {
        // t_40 ends a strict t_15 interval; the second t_15 starts a new one.
        let tr = synthetic(&[(T(1, 5), 0.2), (T(4, 0), 0.2), (T(1, 5), 0.2), (T(2, 4), 0.2), (T(3, 0), 0.2)]);
        let cps = critical_points(&tr);
        let left: Vec<f64> = cps.left().map(|c| c.x).collect();
        assert_eq!(left.len(), 4);
        assert_eq!(left.iter().filter(|&&x| x == 0.0).count(), 2);
        assert!((left[2] - 0.4).abs() < 1e-15);
        let right: Vec<f64> = cps.right().map(|c| c.x).filter(|&x| x > 0.0 && x < 1.0).collect();
        assert_eq!(right.len(), 2);
        assert!((right[0] - 0.4).abs() < 1e-15 && (right[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn stats_account_for_the_whole_interval() {
        let tr = synthetic(&[(T(1, 0), 0.3), (T(1, 5), 0.2), (T(3, 4), 0.4), (T(4, 5), 0.1)]);
        let st = interval_stats(&tr, 0.1, 0.95);
        assert!((st.total() - 0.85).abs() < 1e-15);
        assert!((st.z(T(1, 0)) - 0.2).abs() < 1e-15);
        assert!((st.z(T(1, 5)) - 0.2).abs() < 1e-15);
        assert!((st.z(T(4, 5)) - 0.05).abs() < 1e-15);
        assert!(st.z.iter().all(|(_, v)| *v >= 0.0));
        assert!((st.r_l - 0.1).abs() < 1e-15 && (st.r_r - 0.95).abs() < 1e-15);
    }

    #[test]
    fn far_side_time_reduces_to_radius_when_nothing_is_counted() {
        // t_15 then t_10 then a stop: z_*5 = z_*4 = 0 beyond the anchor,
        // θ_f = 0 at the anchor's left end.
        let tr = synthetic(&[(T(1, 0), 0.5), (T(1, 5), 0.0), (T(1, 0), 0.3), (T(2, 1), 0.2)]);
        let direct = timeline(&tr);
        let mut rep = IntervalLemmaReport {
            min_slack: f64::INFINITY,
            ..Default::default()
        };
        check_form(&direct, &FORM_15, false, 1.0, true, &mut rep);
        assert_eq!(rep.far_side_checked, 2);
        assert!(rep.holds());
    }

    #[test]
    fn mirror_swaps_w_and_e_and_the_thetas() {
        let tr = synthetic(&[(T(1, 5), 0.4), (T(3, 0), 0.6)]);
        let d = timeline(&tr);
        let m = mirrored(&d);
        assert_eq!(m[0].label, T(2, 5));
        assert_eq!(m[1].label, T(4, 0));
        assert_eq!((m[0].x0, m[0].x1), (-1.0, -0.4));
        assert_eq!(m[1].w, (-d[0].e.1, -d[0].e.0));
        assert_eq!(m[1].tf, (d[0].tb.1, d[0].tb.0));
        let back = mirrored(&m);
        assert_eq!(back[0].w, d[0].w);
        assert_eq!(back[1].label, d[1].label);
    }

    #[test]
    fn key_bound_on_a_point() {
        let p = Point::new(0.0, 0.0);
        assert_eq!(p, Point::ORIGIN);
        assert!(4.0 / SQRT3 > 5.0 / SQRT3 - 1.0);
        assert!((AVERAGE_RATE - 2.0 * (5.0 / SQRT3 - 1.0)).abs() < 1e-15);
    }
}
