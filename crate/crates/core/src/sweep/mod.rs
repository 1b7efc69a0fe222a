//! The hexagon family `H(x)` swept across a section of a walk, the potentials
//! built on it, and the checks run against them.
//!
//! Every quantity is piecewise linear in `x`. A [`SweepTrace`] stores, per
//! smooth segment, the value at the left end and the slope of each function.

mod build;
mod checks;
mod intervals;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point, ScaledHexagon, Side, SideLocation, SQRT3, TAU};
use crate::walk::WalkError;

pub use build::{build_sweep, build_sweep_with};
pub use checks::{
    evaluate_at, verify_continuity, verify_discontinuities, verify_f_b, verify_growth_table,
    verify_potential_endpoint, ContinuityReport, DiscontinuityReport, FbReport, GrowthReport, PointValues,
    PotentialEndpointReport,
};
pub use intervals::{
    critical_points, interval_stats, key_lemma_with, verify_critical_points, verify_interval_lemmas,
    verify_key_lemma, CriticalCheck, CriticalPoint, CriticalPointReport, CriticalPointSet, CriticalSide,
    IntervalBound, IntervalLemmaReport, IntervalStats, KeyLemmaReport, LemmaViolation, AVERAGE_RATE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("section ({0}, {1}) contains a gentle edge")]
    GentleEdge(usize, usize),
    #[error("vertex {0} of the first triangle is not on the W side of its hexagon")]
    NotOnWestSide(usize),
    #[error("vertex {0} of the last triangle is not on the E side of its hexagon")]
    NotOnEastSide(usize),
    #[error("hexagon centers decrease between triangles {0} and {1}")]
    CentersNotIncreasing(usize, usize),
    #[error("no side assignment continues the pinned pair at x = {0}")]
    EventSolveFailed(f64),
    #[error("pinned family misses hexagon {0} by {1}")]
    HexMismatch(usize, f64),
    #[error("forbidden transition {0} at x = {1}")]
    ForbiddenTransition(Transition, f64),
    #[error("point {0} is not on the hexagon boundary")]
    NotOnBoundary(Point),
}

/// `t_ij`: `ℓ(x)` in the interior of side `i`, `u(x)` in the interior of side `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transition {
    pub l: u8,
    pub u: u8,
}

impl Transition {
    pub const fn new(l: u8, u: u8) -> Self {
        Transition { l, u }
    }

    /// The label under the reflection `x ↦ −x`.
    pub fn mirrored(self) -> Self {
        Transition::new(5 - self.l, 5 - self.u)
    }

    pub fn is_allowed(self) -> bool {
        ALLOWED.contains(&self)
    }

    pub fn is_bad(self) -> bool {
        matches!((self.l, self.u), (1, 5) | (2, 4) | (3, 1) | (4, 0))
    }

    /// Table row for this label, or `None` when forbidden.
    pub fn rates(self) -> Option<GrowthRates> {
        GROWTH_TABLE.iter().find(|(t, _)| *t == self).map(|(_, r)| *r)
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t_{}{}", self.l, self.u)
    }
}

pub const ALLOWED: [Transition; 12] = [
    Transition::new(1, 0),
    Transition::new(1, 5),
    Transition::new(2, 1),
    Transition::new(2, 0),
    Transition::new(2, 5),
    Transition::new(2, 4),
    Transition::new(3, 1),
    Transition::new(3, 0),
    Transition::new(3, 5),
    Transition::new(3, 4),
    Transition::new(4, 0),
    Transition::new(4, 5),
];

/// Slopes per unit `x`. `p, d_n, y_n, d_s, y_s` are in units of `1/√3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRates {
    pub p: f64,
    pub d_n: f64,
    pub y_n: f64,
    pub d_s: f64,
    pub y_s: f64,
    pub r: f64,
    pub w: f64,
    pub e: f64,
}

const fn rates(p: f64, d_n: f64, y_n: f64, d_s: f64, y_s: f64, r: f64, w: f64, e: f64) -> GrowthRates {
    GrowthRates {
        p,
        d_n,
        y_n,
        d_s,
        y_s,
        r,
        w,
        e,
    }
}

pub const GROWTH_TABLE: [(Transition, GrowthRates); 12] = [
    (Transition::new(1, 0), rates(6.0, 2.0, 1.0, 4.0, -3.0, 1.0, 0.0, 2.0)),
    (Transition::new(1, 5), rates(8.0, 2.0, -1.0, 6.0, -5.0, 1.0, 0.0, 2.0)),
    (Transition::new(2, 1), rates(6.0, 4.0, 3.0, 2.0, -1.0, 1.0, 0.0, 2.0)),
    (Transition::new(2, 0), rates(4.0, 2.0, 1.0, 2.0, -1.0, 0.5, 0.5, 1.5)),
    (Transition::new(2, 5), rates(4.0, 2.0, -1.0, 2.0, -1.0, 0.0, 1.0, 1.0)),
    (Transition::new(2, 4), rates(8.0, 6.0, -5.0, 2.0, -1.0, -1.0, 2.0, 0.0)),
    (Transition::new(3, 1), rates(8.0, 6.0, 5.0, 2.0, 1.0, 1.0, 0.0, 2.0)),
    (Transition::new(3, 0), rates(4.0, 2.0, 1.0, 2.0, 1.0, 0.0, 1.0, 1.0)),
    (Transition::new(3, 5), rates(4.0, 2.0, -1.0, 2.0, 1.0, -0.5, 1.5, 0.5)),
    (Transition::new(3, 4), rates(6.0, 4.0, -3.0, 2.0, 1.0, -1.0, 2.0, 0.0)),
    (Transition::new(4, 0), rates(8.0, 2.0, 1.0, 6.0, 5.0, -1.0, 2.0, 0.0)),
    (Transition::new(4, 5), rates(6.0, 2.0, -1.0, 4.0, 3.0, -1.0, 2.0, 0.0)),
];

/// An affine function stored by its value at the segment's left end.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Lin {
    pub v0: f64,
    pub slope: f64,
}

impl Lin {
    pub fn new(v0: f64, slope: f64) -> Self {
        Lin { v0, slope }
    }

    pub fn at(&self, x0: f64, x: f64) -> f64 {
        self.v0 + self.slope * (x - x0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    /// `p` is the NW vertex of `H(x)`.
    LeadIn1,
    /// The SW vertex of the first hexagon is the SW vertex of `H(x)`.
    LeadIn2,
    /// `H(x)` passes through `u_k` and `l_k`.
    Pinned(usize),
    /// The SE vertex of the last hexagon is the SE vertex of `H(x)`.
    LeadOut1,
    /// `q` is the NE vertex of `H(x)`.
    LeadOut2,
}

/// One smooth piece of the sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub x0: f64,
    pub x1: f64,
    pub label: Transition,
    /// Sites `u(x)` and `ℓ(x)` as used by `U` and `L`.
    pub u: usize,
    pub l: usize,
    /// Sides on which the perimeter positions of `u` and `ℓ` are measured.
    pub u_side: Side,
    pub l_side: Side,
    /// `d(p, u)` and `d(p, ℓ)` in the section prefix.
    pub prefix_u: f64,
    pub prefix_l: f64,
    pub ubar_offset: f64,
    pub lbar_offset: f64,
    pub f: f64,
    pub b: f64,
    pub cy: Lin,
    pub r: Lin,
    pub w: Lin,
    pub e: Lin,
    pub d_n: Lin,
    pub d_s: Lin,
    pub y_n: Lin,
    pub y_s: Lin,
    pub u_pot: Lin,
    pub l_pot: Lin,
    pub p: Lin,
    pub u_bar: Lin,
    pub l_bar: Lin,
    pub theta_f: Lin,
    pub theta_b: Lin,
}

impl Segment {
    pub fn len(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn is_empty(&self) -> bool {
        self.x1 <= self.x0
    }

    pub fn hexagon_at(&self, x: f64) -> ScaledHexagon {
        ScaledHexagon::new(Point::new(x, self.cy.at(self.x0, x)), self.r.at(self.x0, x).max(0.0))
    }

    /// Evaluates `f` at `x` through its stored coefficients.
    pub fn eval(&self, f: impl Fn(&Segment) -> Lin, x: f64) -> f64 {
        f(self).at(self.x0, x)
    }
}

/// Values of `U`, `L` and `P` on both sides of a center `x(c_k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub k: usize,
    pub x: f64,
    pub du: f64,
    pub dl: f64,
    pub dp: f64,
    /// Whether `u` (resp. `ℓ`) changes at this center.
    pub u_changes: bool,
    pub l_changes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTrace {
    pub schema: String,
    /// Section bounds in walk indexing.
    pub section: (usize, usize),
    pub p: usize,
    pub q: usize,
    pub x_start: f64,
    pub x_end: f64,
    /// `x(c_i)..x(c_j)`.
    pub centers: Vec<f64>,
    /// `x(c*)` of the lead-in and its mirror for the lead-out.
    pub lead_points: (f64, f64),
    pub breakpoints: Vec<f64>,
    pub segments: Vec<Segment>,
    pub jumps: Vec<Jump>,
    /// Graph distance from `p` to `q` within the section.
    pub d_pq: f64,
}

impl SweepTrace {
    pub fn labels(&self) -> Vec<Transition> {
        self.segments.iter().map(|s| s.label).collect()
    }

    /// `P(x_end)`.
    pub fn final_potential(&self) -> f64 {
        let s = self.segments.last().expect("empty trace");
        s.p.at(s.x0, s.x1)
    }

    /// The segment containing `x`, right-continuous.
    pub fn segment_at(&self, x: f64) -> &Segment {
        let k = self.segments.partition_point(|s| s.x1 <= x);
        &self.segments[k.min(self.segments.len() - 1)]
    }
}

/// Every label is one of the twelve allowed transitions.
pub fn classify_transitions(trace: &SweepTrace) -> Result<Vec<Transition>, SweepError> {
    for s in &trace.segments {
        if !s.label.is_allowed() {
            return Err(SweepError::ForbiddenTransition(s.label, s.x0));
        }
    }
    Ok(trace.labels())
}

/// Unit vector along `side`, counterclockwise.
fn side_direction(side: Side) -> Point {
    let (a, b) = side.endpoints();
    (b.unit_offset() - a.unit_offset()) * (SQRT3 / 2.0)
}

/// Arc length from N counterclockwise to `p`, measured as if `p` were on `side`.
pub fn perimeter_position_on(h: &ScaledHexagon, side: Side, p: Point) -> f64 {
    let start = h.vertex(side.endpoints().0);
    side.label() as f64 * h.side_length() + side_direction(side).dot(p - start)
}

/// `d_N` for `p` measured on `side`.
pub fn d_n_on(h: &ScaledHexagon, side: Side, p: Point) -> f64 {
    let s = perimeter_position_on(h, side, p);
    if side.is_west() {
        s
    } else {
        s - 6.0 * h.side_length()
    }
}

/// `d_S` for `p` measured on `side`.
pub fn d_s_on(h: &ScaledHexagon, side: Side, p: Point) -> f64 {
    3.0 * h.side_length() - perimeter_position_on(h, side, p)
}

fn boundary_side(h: &ScaledHexagon, p: Point) -> Result<Side, SweepError> {
    match h.locate(p, TAU * h.apothem.max(1.0)) {
        SideLocation::OnSide(s) => Ok(s),
        SideLocation::OnVertex(v) => Ok(v.sides().0),
        _ => Err(SweepError::NotOnBoundary(p)),
    }
}

/// Signed perimeter distance from `u` to the N vertex: positive on sides
/// NW, W, SW and negative on the others.
pub fn perimeter_distance_n(h: &ScaledHexagon, u: Point) -> Result<f64, SweepError> {
    Ok(d_n_on(h, boundary_side(h, u)?, u))
}

/// Signed perimeter distance from `l` to the S vertex, with the same sign rule.
pub fn perimeter_distance_s(h: &ScaledHexagon, l: Point) -> Result<f64, SweepError> {
    Ok(d_s_on(h, boundary_side(h, l)?, l))
}
