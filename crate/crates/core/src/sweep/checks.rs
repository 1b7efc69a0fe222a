//! Growth rates, continuity, jumps and the endpoint identity, with an
//! evaluator that recomputes `H(x)` from scratch at a given `x`.

use serde::{Deserialize, Serialize};

use crate::geom::{hexagon_norm, Point, ScaledHexagon, Side, Vertex, INV_SQRT3, SQRT3, TAU};
use crate::spanner::dijkstra;
use crate::walk::WalkDecomposition;

use super::{perimeter_distance_n, perimeter_distance_s, Jump, Segment, SweepError, SweepTrace, Transition};

/// Tolerance on stored slopes against the table.
pub const TABLE_TOL: f64 = 1e-7;
/// Step of the central differences.
pub const FD_STEP: f64 = 1e-6;
/// Tolerance on central differences against stored slopes.
pub const FD_TOL: f64 = 1e-6;
/// Tolerance on recomputed values against stored coefficients.
pub const VALUE_TOL: f64 = 1e-9;

/// Quantities at one `x`, recomputed without the trace's coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointValues {
    pub r: f64,
    pub w: f64,
    pub e: f64,
    pub y_n: f64,
    pub y_s: f64,
    pub d_n: f64,
    pub d_s: f64,
    pub u_pot: f64,
    pub l_pot: f64,
    pub p: f64,
}

impl PointValues {
    const NAMES: [&'static str; 10] = ["r", "w", "e", "y_n", "y_s", "d_n", "d_s", "U", "L", "P"];

    fn as_array(&self) -> [f64; 10] {
        [
            self.r, self.w, self.e, self.y_n, self.y_s, self.d_n, self.d_s, self.u_pot, self.l_pot, self.p,
        ]
    }

    fn from_segment(s: &Segment, x: f64) -> [f64; 10] {
        [s.r, s.w, s.e, s.y_n, s.y_s, s.d_n, s.d_s, s.u_pot, s.l_pot, s.p].map(|f| f.at(s.x0, x))
    }

    fn slopes(s: &Segment) -> [f64; 10] {
        [s.r, s.w, s.e, s.y_n, s.y_s, s.d_n, s.d_s, s.u_pot, s.l_pot, s.p].map(|f| f.slope)
    }
}

/// The hexagon with center abscissa `x` through `u` and `l`, found by trying
/// every pair of sides and keeping a solution that passes the gauge test.
fn hexagon_through_at(u: Point, l: Point, x: f64) -> Option<ScaledHexagon> {
    for su in Side::ALL {
        for sl in Side::ALL {
            let (nu, nl) = (su.normal(), sl.normal());
            let det = nu.y - nl.y;
            if det.abs() < 1e-9 {
                continue;
            }
            let bu = nu.dot(u) - nu.x * x;
            let bl = nl.dot(l) - nl.x * x;
            let cy = (bu - bl) / det;
            let a = bu - nu.y * cy;
            if a <= 0.0 {
                continue;
            }
            let c = Point::new(x, cy);
            let tol = 1e-10 * (1.0 + a);
            if (hexagon_norm(u - c) - a).abs() <= tol && (hexagon_norm(l - c) - a).abs() <= tol {
                return Some(ScaledHexagon::new(c, a));
            }
        }
    }
    None
}

fn values(h: &ScaledHexagon, u: Point, l: Point, prefix_u: f64, prefix_l: f64) -> Result<PointValues, SweepError> {
    let (d_n, d_s) = if h.apothem == 0.0 {
        (0.0, 0.0)
    } else {
        (perimeter_distance_n(h, u)?, perimeter_distance_s(h, l)?)
    };
    let big_r = 2.0 * INV_SQRT3 * h.apothem;
    Ok(PointValues {
        r: h.apothem,
        w: h.center.x - h.apothem,
        e: h.center.x + h.apothem,
        y_n: h.center.y + big_r,
        y_s: h.center.y - big_r,
        d_n,
        d_s,
        u_pot: prefix_u + d_n,
        l_pot: prefix_l + d_s,
        p: prefix_u + d_n + prefix_l + d_s,
    })
}

/// Recomputes every tabulated quantity at `x` from the walk alone: the phase
/// is found from the hexagon centers, the hexagon by a fixed-`x` solve, the
/// perimeter terms by locating points on it, and prefix distances by a new
/// shortest-path run.
pub fn evaluate_at(walk: &WalkDecomposition, trace: &SweepTrace, x: f64) -> Result<PointValues, SweepError> {
    let (i, j) = trace.section;
    let (p, q) = (trace.p, trace.q);
    let pts = &walk.points;
    let (pp, pq) = (pts[p], pts[q]);
    let h_first = walk.hex(i).hexagon;
    let h_last = walk.hex(j).hexagon;
    let x_ci = h_first.center.x;
    let x_cj = h_last.center.x;
    if x < x_ci {
        let w = h_first.vertex(Vertex::SW);
        let a = x - pp.x;
        let c_star = pp.x + SQRT3 / 2.0 * (pp.y - w.y);
        let cy = if x < c_star { pp.y - a * INV_SQRT3 } else { w.y + a * INV_SQRT3 };
        let h = ScaledHexagon::new(Point::new(x, cy), a.max(0.0));
        return values(&h, pp, pp, 0.0, 0.0);
    }
    if x >= x_cj {
        let w = h_last.vertex(Vertex::SE);
        let a = pq.x - x;
        let c_star = pq.x - SQRT3 / 2.0 * (pq.y - w.y);
        let cy = if x < c_star { w.y + a * INV_SQRT3 } else { pq.y - a * INV_SQRT3 };
        let h = ScaledHexagon::new(Point::new(x, cy), a.max(0.0));
        let d = dijkstra(&walk.section_graph(i, j), p).dist[q];
        return values(&h, pq, pq, d, d);
    }
    let k = (i..j)
        .rev()
        .find(|&k| walk.hex(k).hexagon.center.x <= x)
        .unwrap_or(i);
    let (u, l) = (walk.upper[k], walk.lower[k]);
    let h = hexagon_through_at(pts[u], pts[l], x).ok_or(SweepError::EventSolveFailed(x))?;
    let dist = dijkstra(&walk.section_graph(i, k), p).dist;
    values(&h, pts[u], pts[l], dist[u], dist[l])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub segment: usize,
    pub label: Transition,
    pub quantity: String,
    pub found: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub segments: usize,
    /// Stored slopes against the table.
    pub table_mismatches: Vec<Mismatch>,
    /// `ΔP = Δd_N + Δd_S` and `Δr = (Δe − Δw)/2` on stored slopes.
    pub identity_failures: Vec<Mismatch>,
    pub fd_checked: usize,
    /// Segments shorter than `4h`, left out of the central differences.
    pub fd_skipped: usize,
    pub fd_mismatches: Vec<Mismatch>,
    /// Recomputed values at segment midpoints against stored coefficients.
    pub value_mismatches: Vec<Mismatch>,
    pub forbidden: Vec<(usize, Transition)>,
    pub errors: Vec<String>,
}

impl GrowthReport {
    pub fn holds(&self) -> bool {
        self.table_mismatches.is_empty()
            && self.identity_failures.is_empty()
            && self.fd_mismatches.is_empty()
            && self.value_mismatches.is_empty()
            && self.forbidden.is_empty()
            && self.errors.is_empty()
    }
}

/// Compares each segment's slopes with the table row for its label, checks
/// the two slope identities, and confirms the coefficients by central
/// differences of [`evaluate_at`] at the midpoint.
pub fn verify_growth_table(trace: &SweepTrace, walk: &WalkDecomposition) -> GrowthReport {
    let mut rep = GrowthReport {
        segments: trace.segments.len(),
        ..Default::default()
    };
    for (idx, s) in trace.segments.iter().enumerate() {
        let mism = |q: &str, found: f64, expected: f64| Mismatch {
            segment: idx,
            label: s.label,
            quantity: q.into(),
            found,
            expected,
        };
        let Some(g) = s.label.rates() else {
            rep.forbidden.push((idx, s.label));
            continue;
        };
        let rows = [
            ("P", s.p.slope, g.p * INV_SQRT3),
            ("d_n", s.d_n.slope, g.d_n * INV_SQRT3),
            ("y_n", s.y_n.slope, g.y_n * INV_SQRT3),
            ("d_s", s.d_s.slope, g.d_s * INV_SQRT3),
            ("y_s", s.y_s.slope, g.y_s * INV_SQRT3),
            ("r", s.r.slope, g.r),
            ("w", s.w.slope, g.w),
            ("e", s.e.slope, g.e),
        ];
        for (q, found, expected) in rows {
            if (found - expected).abs() > TABLE_TOL {
                rep.table_mismatches.push(mism(q, found, expected));
            }
        }
        if (s.p.slope - s.d_n.slope - s.d_s.slope).abs() > TABLE_TOL {
            rep.identity_failures.push(mism("P = d_n + d_s", s.p.slope, s.d_n.slope + s.d_s.slope));
        }
        if (s.r.slope - (s.e.slope - s.w.slope) / 2.0).abs() > TABLE_TOL {
            rep.identity_failures.push(mism("r = (e - w)/2", s.r.slope, (s.e.slope - s.w.slope) / 2.0));
        }
        if s.len() < 4.0 * FD_STEP {
            rep.fd_skipped += 1;
            continue;
        }
        let m = 0.5 * (s.x0 + s.x1);
        let eval = |x| evaluate_at(walk, trace, x);
        match (eval(m - FD_STEP), eval(m), eval(m + FD_STEP)) {
            (Ok(lo), Ok(mid), Ok(hi)) => {
                rep.fd_checked += 1;
                let (lo, mid, hi) = (lo.as_array(), mid.as_array(), hi.as_array());
                let stored = PointValues::from_segment(s, m);
                let slopes = PointValues::slopes(s);
                for k in 0..10 {
                    let fd = (hi[k] - lo[k]) / (2.0 * FD_STEP);
                    if (fd - slopes[k]).abs() > FD_TOL {
                        rep.fd_mismatches.push(mism(PointValues::NAMES[k], fd, slopes[k]));
                    }
                    if (mid[k] - stored[k]).abs() > VALUE_TOL {
                        rep.value_mismatches.push(mism(PointValues::NAMES[k], mid[k], stored[k]));
                    }
                }
            }
            (a, b, c) => {
                for e in [a.err(), b.err(), c.err()].into_iter().flatten() {
                    rep.errors.push(format!("segment {idx}: {e}"));
                }
            }
        }
    }
    rep
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscontinuityReport {
    pub jumps: usize,
    /// Jumps where `u` or `ℓ` actually changes.
    pub discontinuities: usize,
    pub violations: Vec<Jump>,
    pub max_jump: f64,
}

impl DiscontinuityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `U`, `L` and `P` do not increase across any center.
pub fn verify_discontinuities(trace: &SweepTrace) -> DiscontinuityReport {
    let mut rep = DiscontinuityReport {
        jumps: trace.jumps.len(),
        max_jump: f64::NEG_INFINITY,
        ..Default::default()
    };
    for j in &trace.jumps {
        if j.u_changes || j.l_changes {
            rep.discontinuities += 1;
        }
        let worst = j.du.max(j.dl).max(j.dp);
        rep.max_jump = rep.max_jump.max(worst);
        if worst > TAU {
            rep.violations.push(*j);
        }
    }
    rep
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub breakpoints: usize,
    pub max_gap: f64,
    /// `(x, quantity, right value − left limit)`.
    pub violations: Vec<(f64, String, f64)>,
}

impl ContinuityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `r, w, e, y(N), y(S), Ū, L̄` are continuous at every breakpoint; `d_N`
/// (resp. `d_S`) wherever `u` (resp. `ℓ`) does not change; `U, L, P`
/// everywhere except at centers.
pub fn verify_continuity(trace: &SweepTrace) -> ContinuityReport {
    let mut rep = ContinuityReport {
        breakpoints: trace.segments.len().saturating_sub(1),
        ..Default::default()
    };
    let at_center = |x: f64| trace.jumps.iter().any(|j| j.x == x);
    for w in trace.segments.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let x = b.x0;
        let mut quantities = vec![
            ("r", a.r, b.r),
            ("w", a.w, b.w),
            ("e", a.e, b.e),
            ("y_n", a.y_n, b.y_n),
            ("y_s", a.y_s, b.y_s),
            ("u_bar", a.u_bar, b.u_bar),
            ("l_bar", a.l_bar, b.l_bar),
        ];
        if a.u == b.u {
            quantities.push(("d_n", a.d_n, b.d_n));
        }
        if a.l == b.l {
            quantities.push(("d_s", a.d_s, b.d_s));
        }
        if !at_center(x) {
            quantities.extend([("U", a.u_pot, b.u_pot), ("L", a.l_pot, b.l_pot), ("P", a.p, b.p)]);
        }
        for (name, fa, fb) in quantities {
            let gap = fb.v0 - fa.at(a.x0, x);
            rep.max_gap = rep.max_gap.max(gap.abs());
            if gap.abs() > TAU {
                rep.violations.push((x, name.into(), gap));
            }
        }
        if (a.x1 - b.x0).abs() > TAU {
            rep.violations.push((x, "x".into(), b.x0 - a.x1));
        }
    }
    rep
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PotentialEndpointReport {
    pub p_end: f64,
    pub d_pq: f64,
    pub diff: f64,
}

impl PotentialEndpointReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.diff <= tol
    }
}

/// `P(x_end)` against twice a fresh shortest-path distance in the section.
pub fn verify_potential_endpoint(trace: &SweepTrace, walk: &WalkDecomposition) -> PotentialEndpointReport {
    let (i, j) = trace.section;
    let d = dijkstra(&walk.section_graph(i, j), trace.p).dist[trace.q];
    let p_end = trace.final_potential();
    PotentialEndpointReport {
        p_end,
        d_pq: d,
        diff: (p_end - 2.0 * d).abs(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FbReport {
    pub checked: usize,
    /// `w ≤ b ≤ f ≤ e` fails at a segment end.
    pub order_violations: Vec<(usize, f64)>,
    /// `f − b = θ_f + θ_b` fails.
    pub identity_violations: Vec<(usize, f64)>,
    /// `b` decreases between consecutive segments.
    pub monotone_violations: Vec<(usize, f64)>,
    /// Segment ends where `x` lies outside `[b, f]`; reported, not required.
    pub x_outside: usize,
}

impl FbReport {
    pub fn holds(&self) -> bool {
        self.order_violations.is_empty() && self.identity_violations.is_empty() && self.monotone_violations.is_empty()
    }
}

pub fn verify_f_b(trace: &SweepTrace) -> FbReport {
    let mut rep = FbReport::default();
    let mut prev_b = f64::NEG_INFINITY;
    for (idx, s) in trace.segments.iter().enumerate() {
        for x in [s.x0, s.x1] {
            rep.checked += 1;
            let (w, e) = (s.w.at(s.x0, x), s.e.at(s.x0, x));
            if !(w <= s.b + TAU && s.b <= s.f + TAU && s.f <= e + TAU) {
                rep.order_violations.push((idx, x));
            }
            let (tf, tb) = (s.theta_f.at(s.x0, x), s.theta_b.at(s.x0, x));
            if (s.f - s.b - tf - tb).abs() > TAU {
                rep.identity_violations.push((idx, x));
            }
            if x > s.f + TAU || x < s.b - TAU {
                rep.x_outside += 1;
            }
        }
        if s.b < prev_b - TAU {
            rep.monotone_violations.push((idx, s.x0));
        }
        prev_b = s.b;
    }
    rep
}
