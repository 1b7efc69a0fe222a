use std::collections::BTreeMap;

use hexspan::delaunay::build_hexagon_delaunay;
use hexspan::geom::{Point, Side, SQRT3};
use hexspan::random::random_instance;
use hexspan::shape::ConvexShape;
use hexspan::sweep::{
    build_sweep_with, classify_transitions, verify_continuity, verify_critical_points, verify_discontinuities,
    verify_f_b, verify_growth_table, verify_interval_lemmas, verify_potential_endpoint, SegmentKind, SweepTrace,
    AVERAGE_RATE,
};
use hexspan::walk::{decompose, find_gentle, WalkDecomposition};

/// `P` slope per label, in units of `1/√3`.
const P_RATE: [((u8, u8), f64); 12] = [
    ((1, 0), 6.0),
    ((1, 5), 8.0),
    ((2, 1), 6.0),
    ((2, 0), 4.0),
    ((2, 5), 4.0),
    ((2, 4), 8.0),
    ((3, 1), 8.0),
    ((3, 0), 4.0),
    ((3, 5), 4.0),
    ((3, 4), 6.0),
    ((4, 0), 8.0),
    ((4, 5), 6.0),
];

fn normal(side: u8) -> Point {
    let (a, b) = (0.5, SQRT3 / 2.0);
    match side {
        0 => Point::new(-a, b),
        1 => Point::new(-1.0, 0.0),
        2 => Point::new(-a, -b),
        3 => Point::new(a, -b),
        4 => Point::new(1.0, 0.0),
        _ => Point::new(a, b),
    }
}

/// Apothem of the hexagon centred on abscissa `x` with `l` on side `sl` and
/// `u` on side `su`.
fn pinned_apothem(x: f64, l: Point, sl: u8, u: Point, su: u8) -> f64 {
    // n·(v − (x, cy)) = r for both, solved for (cy, r).
    let (nl, nu) = (normal(sl), normal(su));
    let (al, bl) = (nl.dot(l) - nl.x * x, nl.y);
    let (au, bu) = (nu.dot(u) - nu.x * x, nu.y);
    // a − b·cy = r
    let cy = (al - au) / (bl - bu);
    al - bl * cy
}

fn floyd_warshall(walk: &WalkDecomposition, i: usize, j: usize, a: usize, b: usize) -> f64 {
    let mut ids: Vec<usize> = walk.section_vertices(i, j);
    ids.sort_unstable();
    let idx: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let m = ids.len();
    let mut d = vec![vec![f64::INFINITY; m]; m];
    for (k, row) in d.iter_mut().enumerate() {
        row[k] = 0.0;
    }
    for (x, y) in walk.section_edges(i, j) {
        let w = walk.point(x).dist(walk.point(y));
        let (x, y) = (idx[&x], idx[&y]);
        d[x][y] = d[x][y].min(w);
        d[y][x] = d[y][x].min(w);
    }
    for k in 0..m {
        for x in 0..m {
            for y in 0..m {
                let via = d[x][k] + d[k][y];
                if via < d[x][y] {
                    d[x][y] = via;
                }
            }
        }
    }
    d[idx[&a]][idx[&b]]
}

struct Harvested {
    walk: WalkDecomposition,
    trace: SweepTrace,
    path_free: bool,
}

fn harvest(limit: usize) -> Vec<Harvested> {
    let shape = ConvexShape::hexagon();
    let mut out = Vec::new();
    for seed in 0..200u64 {
        let pts = random_instance(12 + (seed as usize % 5), seed, &shape).unwrap().points;
        let tri = build_hexagon_delaunay(&pts).unwrap();
        for s in 0..pts.len() {
            for t in 0..pts.len() {
                if s == t {
                    continue;
                }
                let Ok(walk) = decompose(&tri, s, t) else { continue };
                for i in 1..=walk.n() {
                    for j in i..=walk.n() {
                        let Ok(g) = find_gentle(&walk, i, j) else { continue };
                        if g.has_gentle_edge() {
                            continue;
                        }
                        for p in walk.tri(i).into_iter().filter(|&v| walk.touches(i, v, Side::W)) {
                            for q in walk.tri(j).into_iter().filter(|&v| walk.touches(j, v, Side::E)) {
                                if let Ok(trace) = build_sweep_with(&walk, i, j, p, q, &g) {
                                    out.push(Harvested {
                                        walk: walk.clone(),
                                        trace,
                                        path_free: !g.has_gentle_path(),
                                    });
                                    if out.len() >= limit {
                                        return out;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn harvested_sweeps_pass_every_check() {
    let all = harvest(150);
    assert!(all.len() >= 100, "only {} sweeps", all.len());
    let mut path_free = 0;
    let mut pinned_checked = 0;
    for h in &all {
        let (walk, tr) = (&h.walk, &h.trace);
        let tag = format!("walk {}-{} section {:?} p {} q {}", walk.s, walk.t, tr.section, tr.p, tr.q);
        assert!(classify_transitions(tr).is_ok(), "{tag}");
        assert!(verify_growth_table(tr, walk).holds(), "{tag}");
        assert!(verify_potential_endpoint(tr, walk).holds(1e-9), "{tag}");
        assert!(verify_discontinuities(tr).holds(), "{tag}");
        assert!(verify_continuity(tr).holds(), "{tag}");
        assert!(verify_f_b(tr).holds(), "{tag}");

        let (i, j) = tr.section;
        let d = floyd_warshall(walk, i, j, tr.p, tr.q);
        assert!((tr.final_potential() - 2.0 * d).abs() <= 1e-9, "{tag}");
        assert_eq!(tr.segments.first().unwrap().x0, tr.x_start);
        assert_eq!(tr.segments.last().unwrap().x1, tr.x_end);
        for w in tr.segments.windows(2) {
            assert!((w[0].x1 - w[1].x0).abs() <= 1e-12, "{tag}: gap");
        }

        for seg in &tr.segments {
            let rate = P_RATE
                .iter()
                .find(|(k, _)| *k == (seg.label.l, seg.label.u))
                .map(|(_, r)| r / SQRT3)
                .expect("allowed label");
            assert!((seg.p.slope - rate).abs() <= 1e-7, "{tag}: P slope {}", seg.p.slope);
            if !matches!(seg.kind, SegmentKind::Pinned(_)) || seg.len() < 1e-5 {
                continue;
            }
            let (l, u) = (walk.point(seg.l), walk.point(seg.u));
            let xm = 0.5 * (seg.x0 + seg.x1);
            let h = 0.25 * seg.len();
            let r = |x| pinned_apothem(x, l, seg.label.l, u, seg.label.u);
            let slope = (r(xm + h) - r(xm - h)) / (2.0 * h);
            assert!((seg.r.slope - slope).abs() <= 1e-6, "{tag}: r slope {} vs {slope}", seg.r.slope);
            assert!((seg.r.at(seg.x0, xm) - r(xm)).abs() <= 1e-9, "{tag}: r value");
            assert!((seg.w.slope - (1.0 - slope)).abs() <= 1e-6, "{tag}: w slope");
            assert!((seg.e.slope - (1.0 + slope)).abs() <= 1e-6, "{tag}: e slope");
            pinned_checked += 1;
        }

        if h.path_free {
            path_free += 1;
            assert!(verify_interval_lemmas(tr, walk).holds(), "{tag}");
            let cp = verify_critical_points(tr);
            assert!(cp.holds(), "{tag}: {:?}", cp.violations.first());
            let bound = (10.0 / SQRT3 - 2.0) * (tr.x_end - tr.x_start);
            assert!(tr.final_potential() <= bound + 1e-9, "{tag}: terminal bound");
        }
    }
    assert!(path_free > 0);
    assert!(pinned_checked > 100);
    assert!((AVERAGE_RATE - (10.0 / SQRT3 - 2.0)).abs() < 1e-15);
}

#[test]
fn single_triangle_section() {
    let all = harvest(400);
    let h = all
        .iter()
        .find(|h| h.trace.section.0 == h.trace.section.1)
        .expect("a one-triangle section");
    let tr = &h.trace;
    let kinds: Vec<SegmentKind> = tr.segments.iter().map(|s| s.kind).collect();
    assert_eq!(kinds.first(), Some(&SegmentKind::LeadIn1));
    assert_eq!(kinds.last(), Some(&SegmentKind::LeadOut2));
    assert_eq!(tr.centers.len(), 1);
    assert!(tr.x_start <= tr.centers[0] && tr.centers[0] <= tr.x_end);
    let (i, _) = tr.section;
    assert!((tr.final_potential() - 2.0 * floyd_warshall(&h.walk, i, i, tr.p, tr.q)).abs() <= 1e-9);
}

#[test]
fn trace_round_trips_through_json() {
    let h = harvest(1).pop().unwrap();
    let text = serde_json::to_string(&h.trace).unwrap();
    let back: SweepTrace = serde_json::from_str(&text).unwrap();
    assert_eq!(back, h.trace);
}
