//! Construction of the piecewise-linear family `H(x)`.

use crate::geom::{Point, ScaledHexagon, Side, Vertex, INV_SQRT3, SQRT3};
use crate::spanner::dijkstra;
use crate::walk::{find_gentle, GentleReport, WalkDecomposition};

use super::{
    d_n_on, d_s_on, perimeter_distance_n, perimeter_distance_s, Jump, Lin, Segment, SegmentKind, SweepError,
    SweepTrace, Transition,
};

/// Slack allowed when deciding that a side assignment is still valid.
const EVENT_EPS: f64 = 1e-11;
/// Pieces shorter than this are dropped.
const MIN_PIECE: f64 = 1e-13;
/// Largest admitted gap between the pinned family and the next hexagon.
const HEX_MATCH_TOL: f64 = 1e-7;

/// Center ordinate and apothem as affine functions of `x`.
#[derive(Clone, Copy, Debug)]
struct Family {
    cy: (f64, f64),
    a: (f64, f64),
}

impl Family {
    fn hexagon(&self, x: f64) -> ScaledHexagon {
        ScaledHexagon::new(
            Point::new(x, self.cy.0 + self.cy.1 * x),
            (self.a.0 + self.a.1 * x).max(0.0),
        )
    }
}

/// The data a segment's formulas depend on, before coefficients are taken.
struct Spec {
    kind: SegmentKind,
    label: Transition,
    family: Family,
    u: usize,
    l: usize,
    u_side: Side,
    l_side: Side,
    prefix_u: f64,
    prefix_l: f64,
    ubar_offset: f64,
    lbar_offset: f64,
    f: f64,
    b: f64,
}

fn lin(x0: f64, g: impl Fn(f64) -> f64) -> Lin {
    let v0 = g(x0);
    Lin::new(v0, g(x0 + 1.0) - v0)
}

fn make_segment(points: &[Point], spec: &Spec, x0: f64, x1: f64) -> Segment {
    let fam = spec.family;
    let (pu, pl) = (points[spec.u], points[spec.l]);
    let d_n = |x: f64| d_n_on(&fam.hexagon_raw(x), spec.u_side, pu);
    let d_s = |x: f64| d_s_on(&fam.hexagon_raw(x), spec.l_side, pl);
    let a = |x: f64| fam.a.0 + fam.a.1 * x;
    let cy = |x: f64| fam.cy.0 + fam.cy.1 * x;
    let big_r = |x: f64| 2.0 * INV_SQRT3 * a(x);
    Segment {
        kind: spec.kind,
        x0,
        x1,
        label: spec.label,
        u: spec.u,
        l: spec.l,
        u_side: spec.u_side,
        l_side: spec.l_side,
        prefix_u: spec.prefix_u,
        prefix_l: spec.prefix_l,
        ubar_offset: spec.ubar_offset,
        lbar_offset: spec.lbar_offset,
        f: spec.f,
        b: spec.b,
        cy: lin(x0, cy),
        r: lin(x0, a),
        w: lin(x0, |x| x - a(x)),
        e: lin(x0, |x| x + a(x)),
        d_n: lin(x0, d_n),
        d_s: lin(x0, d_s),
        y_n: lin(x0, |x| cy(x) + big_r(x)),
        y_s: lin(x0, |x| cy(x) - big_r(x)),
        u_pot: lin(x0, |x| spec.prefix_u + d_n(x)),
        l_pot: lin(x0, |x| spec.prefix_l + d_s(x)),
        p: lin(x0, |x| spec.prefix_u + d_n(x) + spec.prefix_l + d_s(x)),
        u_bar: lin(x0, |x| spec.ubar_offset + d_n(x)),
        l_bar: lin(x0, |x| spec.lbar_offset + d_s(x)),
        theta_f: lin(x0, |x| spec.f - x),
        theta_b: lin(x0, |x| x - spec.b),
    }
}

impl Family {
    /// As [`Family::hexagon`] but without clamping, so formulas stay affine.
    fn hexagon_raw(&self, x: f64) -> ScaledHexagon {
        ScaledHexagon {
            center: Point::new(x, self.cy.0 + self.cy.1 * x),
            apothem: self.a.0 + self.a.1 * x,
        }
    }
}

/// The affine family through `u` on side `su` and `l` on side `sl`, when
/// the two sides are not parallel to each other in their vertical component.
fn pinned_family(u: Point, su: Side, l: Point, sl: Side) -> Option<Family> {
    let (nu, nl) = (su.normal(), sl.normal());
    let det = nu.y - nl.y;
    if det.abs() < 1e-9 {
        return None;
    }
    // n·(p − c) = a with c = (x, cy):  ny·cy + a = n·p − nx·x
    let (bu0, bu1) = (nu.dot(u), -nu.x);
    let (bl0, bl1) = (nl.dot(l), -nl.x);
    let cy = ((bu0 - bl0) / det, (bu1 - bl1) / det);
    let a = (bu0 - nu.y * cy.0, bu1 - nu.y * cy.1);
    Some(Family { cy, a })
}

/// Range of `x` on which `u` and `l` stay on the boundary with the family's
/// sides, and the apothem stays positive.
fn validity(fam: &Family, u: Point, l: Point) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut constrain = |c0: f64, c1: f64| {
        // c0 + c1·x ≤ EVENT_EPS
        if c1.abs() < 1e-15 {
            if c0 > EVENT_EPS {
                lo = f64::INFINITY;
            }
        } else if c1 > 0.0 {
            hi = hi.min((EVENT_EPS - c0) / c1);
        } else {
            lo = lo.max((EVENT_EPS - c0) / c1);
        }
    };
    for side in Side::ALL {
        let n = side.normal();
        for p in [u, l] {
            // n·(p − c(x)) − a(x) = n·p − nx·x − ny·cy(x) − a(x)
            let c0 = n.dot(p) - n.y * fam.cy.0 - fam.a.0;
            let c1 = -n.x - n.y * fam.cy.1 - fam.a.1;
            constrain(c0, c1);
        }
    }
    constrain(-fam.a.0, -fam.a.1);
    (lo, hi)
}

/// Pieces of the pinned family through `u` and `l` from `x0` to `x1`.
fn pinned_pieces(u: Point, l: Point, x0: f64, x1: f64) -> Result<Vec<(f64, f64, Side, Side, Family)>, SweepError> {
    let mut out = Vec::new();
    let mut x = x0;
    for _ in 0..64 {
        let mut best: Option<(f64, Side, Side, Family)> = None;
        for su in Side::ALL {
            for sl in Side::ALL {
                let Some(fam) = pinned_family(u, su, l, sl) else {
                    continue;
                };
                let (lo, hi) = validity(&fam, u, l);
                if lo <= x + 1e-12 && hi > x + 1e-12 && best.map_or(true, |b| hi > b.0) {
                    best = Some((hi, su, sl, fam));
                }
            }
        }
        let (hi, su, sl, fam) = best.ok_or(SweepError::EventSolveFailed(x))?;
        let end = hi.min(x1);
        out.push((x, end, su, sl, fam));
        if end >= x1 - 1e-12 {
            if let Some(last) = out.last_mut() {
                last.1 = x1;
            }
            return Ok(out);
        }
        x = end;
    }
    Err(SweepError::EventSolveFailed(x))
}

/// Builds the sweep over section `(i, j)` from `p`, a vertex of `T_i` on the
/// W side of `H_i`, to `q`, a vertex of `T_j` on the E side of `H_j`.
pub fn build_sweep(walk: &WalkDecomposition, i: usize, j: usize, p: usize, q: usize) -> Result<SweepTrace, SweepError> {
    let gentle = find_gentle(walk, i, j)?;
    build_sweep_with(walk, i, j, p, q, &gentle)
}

/// [`build_sweep`] with the section's gentle report already computed.
pub fn build_sweep_with(
    walk: &WalkDecomposition,
    i: usize,
    j: usize,
    p: usize,
    q: usize,
    gentle: &GentleReport,
) -> Result<SweepTrace, SweepError> {
    if gentle.has_gentle_edge() {
        return Err(SweepError::GentleEdge(i, j));
    }
    if !walk.tri(i).contains(&p) || !walk.touches(i, p, Side::W) {
        return Err(SweepError::NotOnWestSide(p));
    }
    if !walk.tri(j).contains(&q) || !walk.touches(j, q, Side::E) {
        return Err(SweepError::NotOnEastSide(q));
    }
    let pts = &walk.points;
    let centers: Vec<f64> = (i..=j).map(|k| walk.hex(k).hexagon.center.x).collect();
    for k in i..j {
        if centers[k + 1 - i] < centers[k - i] {
            return Err(SweepError::CentersNotIncreasing(k, k + 1));
        }
    }
    // d(p, ·) within T_i..T_k for k = i..j
    let prefix: Vec<Vec<f64>> = (i..=j).map(|k| dijkstra(&walk.section_graph(i, k), p).dist).collect();
    let d_pq = prefix[j - i][q];

    let (pp, pq) = (pts[p], pts[q]);
    let h_first = walk.hex(i).hexagon;
    let h_last = walk.hex(j).hexagon;
    let mut segs: Vec<Segment> = Vec::new();
    let push = |spec: &Spec, x0: f64, x1: f64, segs: &mut Vec<Segment>| {
        if x1 - x0 > MIN_PIECE {
            segs.push(make_segment(pts, spec, x0, x1));
        }
    };

    // Lead-in: p is the NW vertex, then the SW vertex w of H_i stays fixed.
    let w = h_first.vertex(Vertex::SW);
    let c_star = pp.x + SQRT3 / 2.0 * (pp.y - w.y);
    let x_ci = centers[0];
    let lead1 = Family {
        cy: (pp.y + pp.x * INV_SQRT3, -INV_SQRT3),
        a: (-pp.x, 1.0),
    };
    let lead2 = Family {
        cy: (w.y - pp.x * INV_SQRT3, INV_SQRT3),
        a: (-pp.x, 1.0),
    };
    let lead_spec = |kind, label, family| Spec {
        kind,
        label,
        family,
        u: p,
        l: p,
        u_side: Side::W,
        l_side: Side::W,
        prefix_u: 0.0,
        prefix_l: 0.0,
        ubar_offset: 0.0,
        lbar_offset: 0.0,
        f: pp.x,
        b: pp.x,
    };
    let c_star = c_star.min(x_ci);
    push(&lead_spec(SegmentKind::LeadIn1, Transition::new(1, 0), lead1), pp.x, c_star, &mut segs);
    push(&lead_spec(SegmentKind::LeadIn2, Transition::new(2, 1), lead2), c_star, x_ci, &mut segs);

    // Interior: H(x) pinned through u_k and l_k.
    let (mut ubar, mut lbar) = (0.0, 0.0);
    let (mut old_u, mut old_l) = (p, p);
    let mut jumps = Vec::new();
    for k in i..j {
        let (u, l) = (walk.upper[k], walk.lower[k]);
        let hk = walk.hex(k).hexagon;
        ubar += perimeter_distance_n(&hk, pts[old_u])? - perimeter_distance_n(&hk, pts[u])?;
        lbar += perimeter_distance_s(&hk, pts[old_l])? - perimeter_distance_s(&hk, pts[l])?;
        let (x0, x1) = (centers[k - i], centers[k + 1 - i]);
        let pieces = pinned_pieces(pts[u], pts[l], x0, x1)?;
        let start = pieces[0].4.hexagon(x0);
        let miss = start.center.dist(hk.center) + (start.apothem - hk.apothem).abs();
        if miss > HEX_MATCH_TOL {
            return Err(SweepError::HexMismatch(k, miss));
        }
        let last = pieces[pieces.len() - 1];
        let end = last.4.hexagon(x1);
        let next = walk.hex(k + 1).hexagon;
        let miss = end.center.dist(next.center) + (end.apothem - next.apothem).abs();
        if miss > HEX_MATCH_TOL {
            return Err(SweepError::HexMismatch(k + 1, miss));
        }
        let (fx, bx) = (pts[u].x.max(pts[l].x), pts[u].x.min(pts[l].x));
        for (a, b, su, sl, fam) in pieces {
            let spec = Spec {
                kind: SegmentKind::Pinned(k),
                label: Transition::new(sl.label() as u8, su.label() as u8),
                family: fam,
                u,
                l,
                u_side: su,
                l_side: sl,
                prefix_u: prefix[k - i][u],
                prefix_l: prefix[k - i][l],
                ubar_offset: ubar,
                lbar_offset: lbar,
                f: fx,
                b: bx,
            };
            push(&spec, a, b, &mut segs);
        }
        old_u = u;
        old_l = l;
    }

    // Lead-out: the SE vertex w' of H_j stays fixed, then q is the NE vertex.
    let x_cj = centers[j - i];
    ubar += perimeter_distance_n(&h_last, pts[old_u])? - perimeter_distance_n(&h_last, pq)?;
    lbar += perimeter_distance_s(&h_last, pts[old_l])? - perimeter_distance_s(&h_last, pq)?;
    let w2 = h_last.vertex(Vertex::SE);
    let c_star2 = (pq.x - SQRT3 / 2.0 * (pq.y - w2.y)).max(x_cj);
    let out1 = Family {
        cy: (w2.y + pq.x * INV_SQRT3, -INV_SQRT3),
        a: (pq.x, -1.0),
    };
    let out2 = Family {
        cy: (pq.y - pq.x * INV_SQRT3, INV_SQRT3),
        a: (pq.x, -1.0),
    };
    let out_spec = |kind, label, family, u_side| Spec {
        kind,
        label,
        family,
        u: q,
        l: q,
        u_side,
        l_side: u_side,
        prefix_u: d_pq,
        prefix_l: d_pq,
        ubar_offset: ubar,
        lbar_offset: lbar,
        f: pq.x,
        b: pq.x,
    };
    push(&out_spec(SegmentKind::LeadOut1, Transition::new(3, 4), out1, Side::E), x_cj, c_star2, &mut segs);
    push(&out_spec(SegmentKind::LeadOut2, Transition::new(4, 5), out2, Side::NE), c_star2, pq.x, &mut segs);

    // Jumps at the centers: last value of the previous phase against the first of the next.
    let phase = |s: &Segment| match s.kind {
        SegmentKind::LeadIn1 | SegmentKind::LeadIn2 => i,
        SegmentKind::Pinned(k) => k + 1,
        SegmentKind::LeadOut1 | SegmentKind::LeadOut2 => j + 1,
    };
    for w in segs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (pa, pb) = (phase(a), phase(b));
        if pa != pb {
            let x = b.x0;
            let du = b.u_pot.v0 - a.u_pot.at(a.x0, x);
            let dl = b.l_pot.v0 - a.l_pot.at(a.x0, x);
            jumps.push(Jump {
                k: pb - 1,
                x,
                du,
                dl,
                dp: du + dl,
                u_changes: a.u != b.u,
                l_changes: a.l != b.l,
            });
        }
    }
    let mut breakpoints: Vec<f64> = segs.iter().map(|s| s.x0).collect();
    breakpoints.push(pq.x);
    Ok(SweepTrace {
        schema: "hexspan/1".into(),
        section: (i, j),
        p,
        q,
        x_start: pp.x,
        x_end: pq.x,
        centers,
        lead_points: (c_star, c_star2),
        breakpoints,
        segments: segs,
        jumps,
        d_pq,
    })
}
